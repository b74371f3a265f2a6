#ifndef GRANCAST_ARIMA_HPP
#define GRANCAST_ARIMA_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "grancast/detail/lstsq.hpp"
#include "grancast/detail/nelder_mead.hpp"
#include "grancast/detail/rng.hpp"
#include "grancast/detail/special.hpp"

namespace grancast {

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    void validate() const {
        if (p < 0 || d < 0 || q < 0) throw std::invalid_argument("ARIMA orders must be non-negative");
        if (d > 2) throw std::invalid_argument("differencing order above 2 is not supported");
    }
};

inline std::vector<double> difference(std::span<const double> series, int d) {
    if (d < 0) throw std::invalid_argument("difference: negative order");
    if (static_cast<std::size_t>(d) >= series.size() && d > 0)
        throw std::invalid_argument("difference: order too large for series");
    std::vector<double> out(series.begin(), series.end());
    for (int k = 0; k < d; ++k) {
        std::vector<double> next(out.size() - 1);
        for (std::size_t i = 0; i + 1 < out.size(); ++i) next[i] = out[i + 1] - out[i];
        out = std::move(next);
    }
    return out;
}

/// Inverse of one differencing step: cumulates increments onto `last_level`.
inline std::vector<double> cumulate(std::span<const double> diffs, double last_level) {
    std::vector<double> out(diffs.size());
    double level = last_level;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        level += diffs[i];
        out[i] = level;
    }
    return out;
}

/// Autocorrelation function, lags 0..max_lag; biased covariance estimator
/// normalized at lag 0.
inline std::vector<double> acf(std::span<const double> series, std::size_t max_lag) {
    if (series.size() <= max_lag + 1)
        throw std::invalid_argument("acf: series too short for requested lags");
    const std::size_t n = series.size();
    double lo = series[0], hi = series[0], mean = 0.0;
    for (double v : series) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        mean += v;
    }
    if (lo == hi) throw std::invalid_argument("acf: constant series has no autocorrelation");
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (double v : series) c0 += (v - mean) * (v - mean);
    c0 /= static_cast<double>(n);
    if (c0 <= 0.0) throw std::invalid_argument("acf: constant series has no autocorrelation");
    std::vector<double> out(max_lag + 1);
    out[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) ck += (series[t] - mean) * (series[t + k] - mean);
        ck /= static_cast<double>(n);
        out[k] = ck / c0;
    }
    return out;
}

/// Partial autocorrelations for lags 1..max_lag via the Durbin-Levinson
/// recursion.
inline std::vector<double> pacf(std::span<const double> series, std::size_t max_lag) {
    const auto rho = acf(series, max_lag);
    std::vector<double> out(max_lag);
    if (max_lag == 0) return out;
    std::vector<double> phi_prev(max_lag + 1, 0.0), phi_cur(max_lag + 1, 0.0);
    phi_prev[1] = rho[1];
    out[0] = rho[1];
    for (std::size_t k = 2; k <= max_lag; ++k) {
        double num = rho[k];
        double den = 1.0;
        for (std::size_t j = 1; j < k; ++j) {
            num -= phi_prev[j] * rho[k - j];
            den -= phi_prev[j] * rho[j];
        }
        const double pk = std::fabs(den) > 1e-14 ? num / den : 0.0;
        for (std::size_t j = 1; j < k; ++j) phi_cur[j] = phi_prev[j] - pk * phi_prev[k - j];
        phi_cur[k] = pk;
        out[k - 1] = pk;
        std::swap(phi_prev, phi_cur);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Augmented Dickey-Fuller test
// ---------------------------------------------------------------------------

enum class AdfSpec { none, constant, constant_trend };

struct AdfResult {
    double statistic = 0.0;
    AdfSpec spec = AdfSpec::constant;
    int lags_used = 0;
    double crit_1 = 0.0;
    double crit_5 = 0.0;
    double crit_10 = 0.0;
    std::optional<double> reject_at;  // 0.01 / 0.05 / 0.10, or nullopt
    std::size_t nobs = 0;
};

namespace detail {

struct DfRow {
    double n;  // regression sample size bucket; infinity for the asymptotic row
    double c1, c5, c10;
};

// Dickey-Fuller tau critical values by deterministic specification and
// sample-size bucket (Fuller's tabulation).
inline const DfRow* df_table(AdfSpec spec, std::size_t& rows) {
    static const DfRow none_rows[] = {
        {25, -2.66, -1.95, -1.60},  {50, -2.62, -1.95, -1.61},
        {100, -2.60, -1.95, -1.61}, {250, -2.58, -1.95, -1.62},
        {500, -2.58, -1.95, -1.62}, {std::numeric_limits<double>::infinity(), -2.58, -1.95, -1.62}};
    static const DfRow const_rows[] = {
        {25, -3.75, -3.00, -2.63},  {50, -3.58, -2.93, -2.60},
        {100, -3.51, -2.89, -2.58}, {250, -3.46, -2.88, -2.57},
        {500, -3.44, -2.87, -2.57}, {std::numeric_limits<double>::infinity(), -3.43, -2.86, -2.57}};
    static const DfRow trend_rows[] = {
        {25, -4.38, -3.60, -3.24},  {50, -4.15, -3.50, -3.18},
        {100, -4.04, -3.45, -3.15}, {250, -3.99, -3.43, -3.13},
        {500, -3.98, -3.42, -3.13}, {std::numeric_limits<double>::infinity(), -3.96, -3.41, -3.12}};
    rows = 6;
    switch (spec) {
        case AdfSpec::none: return none_rows;
        case AdfSpec::constant: return const_rows;
        default: return trend_rows;
    }
}

/// Linear interpolation in 1/n between bracketing buckets; clamped below the
/// smallest tabulated size.
inline void df_critical_values(AdfSpec spec, std::size_t n, double& c1, double& c5, double& c10) {
    std::size_t rows = 0;
    const DfRow* table = df_table(spec, rows);
    if (static_cast<double>(n) <= table[0].n) {
        c1 = table[0].c1;
        c5 = table[0].c5;
        c10 = table[0].c10;
        return;
    }
    for (std::size_t i = 0; i + 1 < rows; ++i) {
        if (static_cast<double>(n) <= table[i + 1].n) {
            const double x0 = 1.0 / table[i].n;
            const double x1 = std::isinf(table[i + 1].n) ? 0.0 : 1.0 / table[i + 1].n;
            const double x = 1.0 / static_cast<double>(n);
            const double w = (x - x0) / (x1 - x0);
            c1 = table[i].c1 + w * (table[i + 1].c1 - table[i].c1);
            c5 = table[i].c5 + w * (table[i + 1].c5 - table[i].c5);
            c10 = table[i].c10 + w * (table[i + 1].c10 - table[i].c10);
            return;
        }
    }
    c1 = table[rows - 1].c1;
    c5 = table[rows - 1].c5;
    c10 = table[rows - 1].c10;
}

struct AdfFit {
    double statistic = 0.0;
    double aic = 0.0;
    std::size_t nobs = 0;
};

/// One ADF regression: dy_s = rho*y_{s-1} + sum c_i dy_{s-i} + deterministic
/// terms. `start` indexes the first usable entry of dy.
inline AdfFit adf_regression(std::span<const double> y, const std::vector<double>& dy, int p,
                             std::size_t start, AdfSpec spec) {
    const std::size_t rows = dy.size() - start;
    std::size_t cols = 1 + static_cast<std::size_t>(p);
    if (spec != AdfSpec::none) ++cols;
    if (spec == AdfSpec::constant_trend) ++cols;
    if (rows < cols + 2) throw std::invalid_argument("adf_test: series too short");

    std::vector<double> x(rows * cols);
    std::vector<double> rhs(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t s = start + r;  // dy[s] = y[s+1] - y[s]
        rhs[r] = dy[s];
        std::size_t cidx = 0;
        x[r * cols + cidx++] = y[s];
        for (int i = 1; i <= p; ++i) x[r * cols + cidx++] = dy[s - static_cast<std::size_t>(i)];
        if (spec != AdfSpec::none) x[r * cols + cidx++] = 1.0;
        if (spec == AdfSpec::constant_trend) x[r * cols + cidx++] = static_cast<double>(s + 1);
    }
    const auto fit = lstsq(std::move(x), rows, cols, std::move(rhs));
    const double sigma2 = fit.rss / static_cast<double>(rows - cols);
    const double se = std::sqrt(sigma2 * fit.xtx_inv_diag[0]);
    AdfFit out;
    out.statistic = fit.coef[0] / se;
    out.aic = static_cast<double>(rows) * std::log(fit.rss / static_cast<double>(rows)) +
              2.0 * static_cast<double>(cols);
    out.nobs = rows;
    return out;
}

}  // namespace detail

/// Augmented Dickey-Fuller unit-root test. Augmentation lags are chosen by
/// AIC over a common sample up to the Schwert bound floor(12*(n/100)^0.25)
/// unless `max_lag` pins them. The statistic is compared against embedded
/// critical-value tables; rejection means stationarity.
inline AdfResult adf_test(std::span<const double> y, AdfSpec spec,
                          std::optional<int> max_lag = std::nullopt) {
    const std::size_t n = y.size();
    if (n < 20) throw std::invalid_argument("adf_test: series too short (need 20 observations)");

    std::vector<double> dy(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) dy[i] = y[i + 1] - y[i];

    int pmax = max_lag ? *max_lag
                       : static_cast<int>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    pmax = std::max(0, pmax);
    // Keep enough rows for the largest candidate regression.
    while (pmax > 0 && dy.size() < static_cast<std::size_t>(pmax) + static_cast<std::size_t>(pmax) + 8)
        --pmax;

    int best_p = 0;
    if (!max_lag) {
        double best_aic = std::numeric_limits<double>::infinity();
        const std::size_t common_start = static_cast<std::size_t>(pmax);
        for (int p = 0; p <= pmax; ++p) {
            const auto fit = detail::adf_regression(y, dy, p, common_start, spec);
            if (fit.aic < best_aic) {
                best_aic = fit.aic;
                best_p = p;
            }
        }
    } else {
        best_p = pmax;
    }

    const auto fit = detail::adf_regression(y, dy, best_p, static_cast<std::size_t>(best_p), spec);

    AdfResult res;
    res.statistic = fit.statistic;
    res.spec = spec;
    res.lags_used = best_p;
    res.nobs = fit.nobs;
    detail::df_critical_values(spec, fit.nobs, res.crit_1, res.crit_5, res.crit_10);
    if (res.statistic < res.crit_1)
        res.reject_at = 0.01;
    else if (res.statistic < res.crit_5)
        res.reject_at = 0.05;
    else if (res.statistic < res.crit_10)
        res.reject_at = 0.10;
    return res;
}

// ---------------------------------------------------------------------------
// ARMA estimation (conditional sum of squares)
// ---------------------------------------------------------------------------

struct ArimaModel {
    ArimaOrder order;
    double intercept = 0.0;
    std::vector<double> ar_coeffs;
    std::vector<double> ma_coeffs;
    double sigma2 = 0.0;
    std::vector<double> residuals;  // conditional residuals u_t, t = p..nw-1
    std::size_t n_obs = 0;          // effective sample size after conditioning
    double sse = 0.0;
    bool converged = true;
    std::vector<double> history;         // differenced training series
    std::vector<double> integrate_tail;  // last level of each differencing stage
};

namespace detail {

/// Schur-Cohn via the inverse Levinson recursion: maps AR coefficients to
/// partial autocorrelations. Stationary iff every |r_k| < 1. Returns the
/// amount by which the worst coefficient breaches the (1 - margin) wall, or 0.
inline double ar_stationarity_excess(std::span<const double> phi, double margin = 1e-6) {
    std::vector<double> a(phi.begin(), phi.end());
    double excess = 0.0;
    for (std::size_t k = a.size(); k >= 1; --k) {
        const double r = a[k - 1];
        if (!(std::fabs(r) < 1.0 - margin)) {
            excess += std::fabs(r) - (1.0 - margin);
            return std::max(excess, margin);
        }
        if (k == 1) break;
        const double denom = 1.0 - r * r;
        std::vector<double> b(k - 1);
        for (std::size_t i = 0; i < k - 1; ++i) b[i] = (a[i] + r * a[k - 2 - i]) / denom;
        a = std::move(b);
    }
    return 0.0;
}

inline bool ar_stationary(std::span<const double> phi) {
    return phi.empty() || ar_stationarity_excess(phi) == 0.0;
}

/// Conditional sum of squares for the ARMA recursion with zeroed pre-sample
/// innovations; the first p observations condition the AR terms. Fills `u`
/// (which must have size nw) with residuals at indices p..nw-1.
inline double css_objective(std::span<const double> w, int p, int q, const double* params,
                            std::vector<double>& u) {
    const double theta0 = params[0];
    const double* phi = params + 1;
    const double* theta = params + 1 + p;
    const std::size_t nw = w.size();
    const std::size_t start = static_cast<std::size_t>(p);
    double sse = 0.0;
    for (std::size_t t = start; t < nw; ++t) {
        double e = w[t] - theta0;
        for (int i = 1; i <= p; ++i) e -= phi[i - 1] * w[t - static_cast<std::size_t>(i)];
        for (int j = 1; j <= q; ++j) {
            const std::size_t back = static_cast<std::size_t>(j);
            if (t >= start + back) e -= theta[j - 1] * u[t - back];
        }
        u[t] = e;
        sse += e * e;
    }
    return sse;
}

}  // namespace detail

/// Fits ARIMA(p,d,q) by minimizing the conditional sum of squared innovations
/// over (intercept, AR, MA) with Nelder-Mead from several seeded starts. AR
/// stationarity is enforced by a hard wall inside the objective, so returned
/// models always have AR roots strictly outside the unit circle.
inline ArimaModel estimate_arma(std::span<const double> series, ArimaOrder order,
                                std::uint64_t seed = 0x414d5241ULL) {
    order.validate();
    const int p = order.p, q = order.q;
    if (series.size() <= static_cast<std::size_t>(order.d))
        throw std::invalid_argument("estimate_arma: series too short to difference");

    std::vector<double> integrate_tail;
    std::vector<double> w(series.begin(), series.end());
    for (int k = 0; k < order.d; ++k) {
        integrate_tail.push_back(w.back());
        std::vector<double> next(w.size() - 1);
        for (std::size_t i = 0; i + 1 < w.size(); ++i) next[i] = w[i + 1] - w[i];
        w = std::move(next);
    }

    const std::size_t nw = w.size();
    if (nw <= static_cast<std::size_t>(p)) throw std::invalid_argument("estimate_arma: series too short");
    const std::size_t neff = nw - static_cast<std::size_t>(p);
    if (neff < 5 * static_cast<std::size_t>(p + q + 1))
        throw std::invalid_argument("estimate_arma: effective sample below 5*(p+q+1)");

    double tail_mean = 0.0;
    for (std::size_t t = static_cast<std::size_t>(p); t < nw; ++t) tail_mean += w[t];
    tail_mean /= static_cast<double>(neff);
    double null_sse = 0.0;
    for (std::size_t t = static_cast<std::size_t>(p); t < nw; ++t)
        null_sse += (w[t] - tail_mean) * (w[t] - tail_mean);

    const std::size_t dim = 1 + static_cast<std::size_t>(p + q);
    std::vector<double> u(nw, 0.0);
    const auto objective = [&](const std::vector<double>& x) {
        if (p > 0) {
            const double excess =
                detail::ar_stationarity_excess(std::span<const double>(x.data() + 1, static_cast<std::size_t>(p)));
            if (excess > 0.0) return 1e100 * (1.0 + excess);
        }
        const double sse = detail::css_objective(w, p, q, x.data(), u);
        return std::isfinite(sse) ? sse : 1e120;
    };

    std::vector<double> best_x;
    double best_sse = std::numeric_limits<double>::infinity();
    bool best_converged = false;

    if (p == 0 && q == 0) {
        best_x = {tail_mean};
        best_sse = null_sse;
        best_converged = true;
    } else {
        for (int start = 0; start < 5; ++start) {
            std::vector<double> x0(dim, 0.0);
            x0[0] = tail_mean;
            if (start > 0) {
                std::mt19937_64 gen(detail::mix_seed(seed, static_cast<std::uint64_t>(start)));
                double phi_sum = 0.0;
                const double ar_span = 0.8 / std::max(1, p);
                const double ma_span = 0.5 / std::max(1, q);
                for (int i = 0; i < p; ++i) {
                    x0[1 + static_cast<std::size_t>(i)] = detail::uniform_range(gen, -ar_span, ar_span);
                    phi_sum += x0[1 + static_cast<std::size_t>(i)];
                }
                for (int j = 0; j < q; ++j)
                    x0[1 + static_cast<std::size_t>(p + j)] = detail::uniform_range(gen, -ma_span, ma_span);
                x0[0] = tail_mean * (1.0 - phi_sum);
            }
            const auto nm =
                detail::nelder_mead(objective, x0, 0.1, 1e-12, 400 * (dim + 2));
            if (nm.fx < best_sse) {
                best_sse = nm.fx;
                best_x = nm.x;
                best_converged = nm.converged;
            }
        }
    }

    if (!std::isfinite(best_sse) || best_sse > null_sse * (1.0 + 1e-9) + 1e-12)
        throw std::runtime_error("estimate_arma: optimizer failed to improve on the null model");
    if (!(best_sse / static_cast<double>(neff) > 0.0))
        throw std::runtime_error("estimate_arma: degenerate fit with zero residual variance");

    ArimaModel model;
    model.order = order;
    model.intercept = best_x[0];
    model.ar_coeffs.assign(best_x.begin() + 1, best_x.begin() + 1 + p);
    model.ma_coeffs.assign(best_x.begin() + 1 + p, best_x.end());
    model.sse = detail::css_objective(w, p, q, best_x.data(), u);
    model.n_obs = neff;
    model.sigma2 = model.sse / static_cast<double>(neff);
    model.residuals.assign(u.begin() + p, u.end());
    model.converged = best_converged;
    model.history = std::move(w);
    model.integrate_tail = std::move(integrate_tail);
    return model;
}

/// Gaussian AIC on the conditional SSE: n ln(SSE/n) + 2 (p + q + 2); the +2
/// counts the intercept and the innovation variance.
inline double aic(const ArimaModel& model) {
    const double n = static_cast<double>(model.n_obs);
    return n * std::log(model.sse / n) +
           2.0 * static_cast<double>(model.order.p + model.order.q + 2);
}

struct OrderScanEntry {
    ArimaOrder order;
    double aic = 0.0;
    bool ok = false;
    std::string error;
};

struct OrderScan {
    ArimaOrder best;
    std::vector<OrderScanEntry> table;
};

/// Estimates every (p, q) in the grid at the given d and returns the
/// AIC-minimal converged order; ties break toward smaller p+q, then smaller p.
inline OrderScan select_order(std::span<const double> series, int p_max, int q_max, int d,
                              std::uint64_t seed = 0x414d5241ULL) {
    if (p_max < 0 || q_max < 0) throw std::invalid_argument("select_order: negative bounds");
    OrderScan scan;
    bool have_best = false;
    double best_aic = 0.0;
    for (int p = 0; p <= p_max; ++p) {
        for (int q = 0; q <= q_max; ++q) {
            OrderScanEntry entry;
            entry.order = {p, d, q};
            try {
                const ArimaModel m = estimate_arma(
                    series, entry.order,
                    detail::mix_seed(seed, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q)));
                entry.aic = aic(m);
                entry.ok = true;
            } catch (const std::exception& e) {
                entry.error = e.what();
            }
            if (entry.ok) {
                const bool better =
                    !have_best || entry.aic < best_aic ||
                    (entry.aic == best_aic &&
                     (p + q < scan.best.p + scan.best.q ||
                      (p + q == scan.best.p + scan.best.q && p < scan.best.p)));
                if (better) {
                    best_aic = entry.aic;
                    scan.best = entry.order;
                    have_best = true;
                }
            }
            scan.table.push_back(std::move(entry));
        }
    }
    if (!have_best) throw std::runtime_error("select_order: no candidate order converged");
    return scan;
}

// ---------------------------------------------------------------------------
// Ljung-Box white-noise test
// ---------------------------------------------------------------------------

struct LjungBoxRow {
    int lag = 0;
    double q_stat = 0.0;
    double p_value = 1.0;
};

/// Q(k) = n(n+2) sum_{j<=k} rho_j^2/(n-j); p-values from chi-square with
/// max(k - fitted_param_count, 1) degrees of freedom.
inline std::vector<LjungBoxRow> ljung_box(std::span<const double> residuals, int max_lag,
                                          int fitted_param_count) {
    if (max_lag < 1) throw std::invalid_argument("ljung_box: need at least one lag");
    const auto rho = acf(residuals, static_cast<std::size_t>(max_lag));
    const double n = static_cast<double>(residuals.size());
    std::vector<LjungBoxRow> rows;
    rows.reserve(static_cast<std::size_t>(max_lag));
    double accum = 0.0;
    for (int k = 1; k <= max_lag; ++k) {
        accum += rho[static_cast<std::size_t>(k)] * rho[static_cast<std::size_t>(k)] /
                 (n - static_cast<double>(k));
        LjungBoxRow row;
        row.lag = k;
        row.q_stat = n * (n + 2.0) * accum;
        const double df = std::max(k - fitted_param_count, 1);
        row.p_value = 1.0 - detail::chi_square_cdf(row.q_stat, df);
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Forecasting
// ---------------------------------------------------------------------------

enum class ForecastMode { dynamic, static_ };

/// Multi-step forecast on the original scale. Dynamic mode recurses the ARMA
/// equation feeding forecasts back and zeroing future innovations; static
/// mode produces one-step-ahead forecasts substituting the provided actual
/// values (original scale, aligned to the forecast steps) for lagged levels.
inline std::vector<double> forecast(const ArimaModel& model, int horizon, ForecastMode mode,
                                    std::span<const double> actuals = {}) {
    if (horizon < 1) throw std::invalid_argument("forecast: horizon must be at least 1");
    const int p = model.order.p, q = model.order.q, d = model.order.d;
    const std::size_t nw = model.history.size();
    const std::size_t h = static_cast<std::size_t>(horizon);

    if (mode == ForecastMode::static_ && actuals.size() + 1 < h)
        throw std::invalid_argument("forecast: static mode needs horizon-1 actual values");

    // Full-length innovation array: zeros before the conditioning point.
    std::vector<double> u(nw, 0.0);
    for (std::size_t i = 0; i < model.residuals.size(); ++i)
        u[nw - model.residuals.size() + i] = model.residuals[i];

    std::vector<double> w = model.history;
    std::vector<double> w_forecasts(h);

    if (mode == ForecastMode::dynamic) {
        for (std::size_t s = 0; s < h; ++s) {
            const std::size_t t = nw + s;
            double f = model.intercept;
            for (int i = 1; i <= p; ++i) f += model.ar_coeffs[static_cast<std::size_t>(i - 1)] * w[t - static_cast<std::size_t>(i)];
            for (int j = 1; j <= q; ++j) {
                const std::size_t back = static_cast<std::size_t>(j);
                if (t >= back && t - back < u.size())
                    f += model.ma_coeffs[static_cast<std::size_t>(j - 1)] * u[t - back];
            }
            w.push_back(f);
            u.push_back(0.0);
            w_forecasts[s] = f;
        }
        // Invert the differencing by cumulating from the stored level tails.
        std::vector<double> out = w_forecasts;
        for (int k = d - 1; k >= 0; --k)
            out = cumulate(out, model.integrate_tail[static_cast<std::size_t>(k)]);
        return out;
    }

    // Static mode: levels per differencing stage track the actual path.
    std::vector<double> levels = model.integrate_tail;  // stage 0..d-1
    std::vector<double> out(h);
    for (std::size_t s = 0; s < h; ++s) {
        const std::size_t t = nw + s;
        double f = model.intercept;
        for (int i = 1; i <= p; ++i) f += model.ar_coeffs[static_cast<std::size_t>(i - 1)] * w[t - static_cast<std::size_t>(i)];
        for (int j = 1; j <= q; ++j) {
            const std::size_t back = static_cast<std::size_t>(j);
            if (t >= back && t - back < u.size())
                f += model.ma_coeffs[static_cast<std::size_t>(j - 1)] * u[t - back];
        }
        // One-step level forecast from the actual previous levels.
        double level_fc = f;
        for (int k = d - 1; k >= 0; --k) level_fc += levels[static_cast<std::size_t>(k)];
        out[s] = level_fc;

        if (s + 1 < h) {
            // Consume the observed value: difference it down to the model scale.
            double delta = actuals[s];
            for (int k = 0; k < d; ++k) {
                const double tmp = delta - levels[static_cast<std::size_t>(k)];
                levels[static_cast<std::size_t>(k)] = delta;
                delta = tmp;
            }
            w.push_back(delta);
            u.push_back(delta - f);
        }
    }
    return out;
}

}  // namespace grancast

#endif
