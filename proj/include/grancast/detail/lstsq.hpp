#ifndef GRANCAST_DETAIL_LSTSQ_HPP
#define GRANCAST_DETAIL_LSTSQ_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace grancast::detail {

struct LstsqResult {
    std::vector<double> coef;
    double rss = 0.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    // Diagonal of (X'X)^-1; multiplied by the residual variance it gives the
    // squared standard errors of the coefficients.
    std::vector<double> xtx_inv_diag;
};

/// Least squares via Householder QR. `x` is row-major rows x cols.
inline LstsqResult lstsq(std::vector<double> x, std::size_t rows, std::size_t cols,
                         std::vector<double> y) {
    if (rows < cols || cols == 0) throw std::invalid_argument("lstsq: underdetermined system");
    if (y.size() != rows) throw std::invalid_argument("lstsq: size mismatch");

    auto at = [&](std::size_t i, std::size_t j) -> double& { return x[i * cols + j]; };

    // Householder triangularization, applied to y as we go.
    for (std::size_t k = 0; k < cols; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < rows; ++i) norm += at(i, k) * at(i, k);
        norm = std::sqrt(norm);
        if (norm < 1e-280) throw std::runtime_error("lstsq: rank-deficient design matrix");
        if (at(k, k) < 0) norm = -norm;  // avoids cancellation in the reflector

        for (std::size_t i = k; i < rows; ++i) at(i, k) /= norm;
        at(k, k) += 1.0;

        for (std::size_t j = k + 1; j < cols; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < rows; ++i) s += at(i, k) * at(i, j);
            s = -s / at(k, k);
            for (std::size_t i = k; i < rows; ++i) at(i, j) += s * at(i, k);
        }
        double s = 0.0;
        for (std::size_t i = k; i < rows; ++i) s += at(i, k) * y[i];
        s = -s / at(k, k);
        for (std::size_t i = k; i < rows; ++i) y[i] += s * at(i, k);

        at(k, k) = -norm;  // stash R's diagonal
    }

    LstsqResult res;
    res.rows = rows;
    res.cols = cols;
    res.coef.assign(cols, 0.0);

    // Back substitution on R coef = Q'y. R(k,k) lives at at(k,k), upper part above.
    for (std::size_t kk = cols; kk > 0; --kk) {
        const std::size_t k = kk - 1;
        double s = y[k];
        for (std::size_t j = k + 1; j < cols; ++j) s -= at(k, j) * res.coef[j];
        res.coef[k] = s / at(k, k);
    }

    res.rss = 0.0;
    for (std::size_t i = cols; i < rows; ++i) res.rss += y[i] * y[i];

    // diag((X'X)^-1) = rowwise squared norms of R^-T e_j: forward substitution.
    res.xtx_inv_diag.assign(cols, 0.0);
    std::vector<double> u(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < cols; ++i) u[i] = 0.0;
        for (std::size_t i = j; i < cols; ++i) {
            double s = (i == j) ? 1.0 : 0.0;
            for (std::size_t l = j; l < i; ++l) s -= at(l, i) * u[l];
            u[i] = s / at(i, i);
        }
        double d = 0.0;
        for (std::size_t i = j; i < cols; ++i) d += u[i] * u[i];
        res.xtx_inv_diag[j] = d;
    }
    return res;
}

}  // namespace grancast::detail

#endif
