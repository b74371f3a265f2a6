#ifndef GRANCAST_DETAIL_NELDER_MEAD_HPP
#define GRANCAST_DETAIL_NELDER_MEAD_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace grancast::detail {

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    std::size_t evals = 0;
    bool converged = false;
};

/// Derivative-free simplex minimization (standard reflection/expansion/
/// contraction/shrink coefficients).
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, double step, double ftol_rel,
                                    std::size_t max_evals) {
    const std::size_t dim = x0.size();
    NelderMeadResult out;
    if (dim == 0) {
        out.x = x0;
        out.fx = f(x0);
        out.evals = 1;
        out.converged = true;
        return out;
    }

    std::vector<std::vector<double>> pts(dim + 1, x0);
    std::vector<double> fv(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) {
        double h = step * std::max(1.0, std::fabs(x0[i]));
        pts[i + 1][i] += h;
    }
    for (std::size_t i = 0; i <= dim; ++i) fv[i] = f(pts[i]);
    out.evals = dim + 1;

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);

    while (out.evals < max_evals) {
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[dim], second = order[dim - 1];

        const double spread = std::fabs(fv[worst] - fv[best]);
        if (spread <= ftol_rel * (std::fabs(fv[best]) + ftol_rel)) {
            out.converged = true;
            break;
        }

        for (std::size_t j = 0; j < dim; ++j) centroid[j] = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += pts[i][j];
        }
        for (std::size_t j = 0; j < dim; ++j) centroid[j] /= static_cast<double>(dim);

        for (std::size_t j = 0; j < dim; ++j) xr[j] = centroid[j] + (centroid[j] - pts[worst][j]);
        const double fr = f(xr);
        ++out.evals;

        if (fr < fv[order[0]]) {
            for (std::size_t j = 0; j < dim; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[worst][j]);
            const double fe = f(xe);
            ++out.evals;
            if (fe < fr) {
                pts[worst] = xe;
                fv[worst] = fe;
            } else {
                pts[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            if (outside) {
                for (std::size_t j = 0; j < dim; ++j) xc[j] = centroid[j] + 0.5 * (xr[j] - centroid[j]);
            } else {
                for (std::size_t j = 0; j < dim; ++j) xc[j] = centroid[j] + 0.5 * (pts[worst][j] - centroid[j]);
            }
            const double fc = f(xc);
            ++out.evals;
            if (fc < std::min(fr, fv[worst])) {
                pts[worst] = xc;
                fv[worst] = fc;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < dim; ++j)
                        pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
                    fv[i] = f(pts[i]);
                    ++out.evals;
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= dim; ++i)
        if (fv[i] < fv[best]) best = i;
    out.x = pts[best];
    out.fx = fv[best];
    return out;
}

}  // namespace grancast::detail

#endif
