#ifndef GRANCAST_SVR_HPP
#define GRANCAST_SVR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "grancast/timeseries.hpp"

namespace grancast {

struct SvrParams {
    double c_penalty = 1.0;  // box constraint C
    double epsilon = 0.1;    // insensitive-tube half width, in target units
    double gamma = 1.0;      // RBF kernel width

    void validate() const {
        if (!(c_penalty > 0.0)) throw std::invalid_argument("C must be positive");
        if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
        if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    }
};

inline double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    if (x.size() != y.size()) throw std::invalid_argument("rbf_kernel: dimension mismatch");
    if (!(gamma > 0.0)) throw std::invalid_argument("rbf_kernel: gamma must be positive");
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

/// Lag-embedded regression set: inputs are windows of past values, targets the
/// next value.
struct SupervisedSet {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    std::size_t lag = 0;

    std::size_t size() const { return targets.size(); }
};

inline SupervisedSet make_supervised(std::span<const double> sequence, std::size_t lag) {
    if (lag < 1) throw std::invalid_argument("lag must be at least 1");
    if (sequence.size() <= lag)
        throw std::invalid_argument("sequence too short for lag embedding");
    SupervisedSet set;
    set.lag = lag;
    const std::size_t n = sequence.size() - lag;
    set.inputs.reserve(n);
    set.targets.reserve(n);
    for (std::size_t t = lag; t < sequence.size(); ++t) {
        set.inputs.emplace_back(sequence.begin() + static_cast<std::ptrdiff_t>(t - lag),
                                sequence.begin() + static_cast<std::ptrdiff_t>(t));
        set.targets.push_back(sequence[t]);
    }
    return set;
}

/// Joint embedding over several aligned channels: each input concatenates the
/// lag window of every channel; targets come from `target`.
inline SupervisedSet make_supervised_joint(const std::vector<std::span<const double>>& channels,
                                           std::span<const double> target, std::size_t lag) {
    if (lag < 1) throw std::invalid_argument("lag must be at least 1");
    if (channels.empty()) throw std::invalid_argument("no feature channels");
    const std::size_t len = target.size();
    for (const auto& c : channels)
        if (c.size() != len) throw std::invalid_argument("channel lengths differ from target");
    if (len <= lag) throw std::invalid_argument("sequence too short for lag embedding");
    SupervisedSet set;
    set.lag = lag;
    for (std::size_t t = lag; t < len; ++t) {
        std::vector<double> row;
        row.reserve(lag * channels.size());
        for (std::size_t j = t - lag; j < t; ++j)
            for (const auto& c : channels) row.push_back(c[j]);
        set.inputs.push_back(std::move(row));
        set.targets.push_back(target[t]);
    }
    return set;
}

/// Trained epsilon-SVR. Only points with non-zero dual coefficient are kept.
/// Scaling states default to the identity; a pipeline that trains on scaled
/// data stamps its own states here so raw-space prediction works.
struct SvrModel {
    std::vector<std::vector<double>> support_inputs;
    std::vector<double> dual_coeffs;          // beta_i, non-zero entries only
    std::vector<std::size_t> support_indices;  // rows of the training set
    double bias = 0.0;
    SvrParams params;
    ScalingState input_scaling;
    ScalingState target_scaling;
    bool converged = true;
    std::size_t iterations = 0;
    double kkt_violation = 0.0;
    double dual_objective = 0.0;  // maximized Wolfe dual at the solution
};

/// Decision function in the model's own (training) space.
inline double predict_scaled(const SvrModel& model, std::span<const double> x) {
    for (const auto& sv : model.support_inputs)
        if (sv.size() != x.size()) throw std::invalid_argument("predict: dimension mismatch");
    double f = model.bias;
    for (std::size_t i = 0; i < model.support_inputs.size(); ++i)
        f += model.dual_coeffs[i] * rbf_kernel(x, model.support_inputs[i], model.params.gamma);
    return f;
}

/// Raw-space prediction: scales the query, evaluates the dual expansion, and
/// inverse-scales the result.
inline double predict(const SvrModel& model, std::span<const double> x) {
    std::vector<double> xs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xs[i] = scale_apply(model.input_scaling, x[i]);
    return scale_invert(model.target_scaling, predict_scaled(model, xs));
}

/// Optional per-iteration trace of the (maximized) dual objective.
struct SmoTrace {
    std::vector<double> objective;
};

/// SMO with maximal-violating-pair selection on the 2n-variable dual. The
/// first n variables are the up-tube multipliers (sign +1), the second n the
/// down-tube multipliers (sign -1). Stops when the KKT violation m - M drops
/// to `tol`. `max_iter == 0` selects the default 10 * n * 1000.
inline SvrModel train_svr(const SupervisedSet& data, SvrParams params, double tol = 1e-3,
                          std::size_t max_iter = 0, SmoTrace* trace = nullptr) {
    params.validate();
    if (data.size() == 0) throw std::invalid_argument("train_svr: empty training set");
    if (data.inputs.size() != data.targets.size())
        throw std::invalid_argument("train_svr: inputs/targets size mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("train_svr: tol must be positive");

    const std::size_t n = data.size();
    const std::size_t dim = data.inputs[0].size();
    for (const auto& row : data.inputs)
        if (row.size() != dim) throw std::invalid_argument("train_svr: ragged input rows");
    if (max_iter == 0) max_iter = 10 * n * 1000;

    const double c = params.c_penalty;
    const double eps = params.epsilon;

    std::vector<double> kmat(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double k = rbf_kernel(data.inputs[i], data.inputs[j], params.gamma);
            kmat[i * n + j] = k;
            kmat[j * n + i] = k;
        }

    const std::size_t m2 = 2 * n;
    std::vector<double> z(m2, 0.0);
    std::vector<double> grad(m2);
    for (std::size_t i = 0; i < n; ++i) {
        grad[i] = eps - data.targets[i];
        grad[n + i] = eps + data.targets[i];
    }
    const auto sign_of = [n](std::size_t t) { return t < n ? 1.0 : -1.0; };
    const auto kernel_at = [&](std::size_t t, std::size_t u) { return kmat[(t % n) * n + (u % n)]; };

    const auto objective_min = [&] {
        // F = 1/2 (z'G + z'p); G carries Pz + p throughout.
        double zg = 0.0, zp = 0.0;
        for (std::size_t t = 0; t < m2; ++t) {
            zg += z[t] * grad[t];
            const double p = (t < n) ? eps - data.targets[t] : eps + data.targets[t - n];
            zp += z[t] * p;
        }
        return 0.5 * (zg + zp);
    };

    double violation = 0.0;
    bool converged = false;
    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        std::size_t i = m2, j = m2;
        for (std::size_t t = 0; t < m2; ++t) {
            const bool in_up = (t < n) ? z[t] < c : z[t] > 0.0;
            const bool in_low = (t < n) ? z[t] > 0.0 : z[t] < c;
            const double v = -sign_of(t) * grad[t];
            if (in_up && v > up_best) {
                up_best = v;
                i = t;
            }
            if (in_low && v < low_best) {
                low_best = v;
                j = t;
            }
        }
        violation = up_best - low_best;
        if (violation <= tol || i == m2 || j == m2) {
            converged = true;
            break;
        }

        const double zi_old = z[i], zj_old = z[j];
        if (sign_of(i) != sign_of(j)) {
            const double quad = std::max(kernel_at(i, i) + kernel_at(j, j) + 2.0 * kernel_at(i, j), 1e-12);
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = z[i] - z[j];
            z[i] += delta;
            z[j] += delta;
            if (diff > 0.0) {
                if (z[j] < 0.0) {
                    z[j] = 0.0;
                    z[i] = diff;
                }
            } else {
                if (z[i] < 0.0) {
                    z[i] = 0.0;
                    z[j] = -diff;
                }
            }
            if (diff > 0.0) {
                if (z[i] > c) {
                    z[i] = c;
                    z[j] = c - diff;
                }
            } else {
                if (z[j] > c) {
                    z[j] = c;
                    z[i] = c + diff;
                }
            }
        } else {
            const double quad = std::max(kernel_at(i, i) + kernel_at(j, j) - 2.0 * kernel_at(i, j), 1e-12);
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = z[i] + z[j];
            z[i] -= delta;
            z[j] += delta;
            if (sum > c) {
                if (z[i] > c) {
                    z[i] = c;
                    z[j] = sum - c;
                }
            } else {
                if (z[j] < 0.0) {
                    z[j] = 0.0;
                    z[i] = sum;
                }
            }
            if (sum > c) {
                if (z[j] > c) {
                    z[j] = c;
                    z[i] = sum - c;
                }
            } else {
                if (z[i] < 0.0) {
                    z[i] = 0.0;
                    z[j] = sum;
                }
            }
        }

        const double di = z[i] - zi_old;
        const double dj = z[j] - zj_old;
        const double si = sign_of(i), sj = sign_of(j);
        for (std::size_t t = 0; t < m2; ++t) {
            const double st = sign_of(t);
            grad[t] += st * si * kernel_at(t, i) * di + st * sj * kernel_at(t, j) * dj;
        }
        if (trace) trace->objective.push_back(-objective_min());
    }

    // Bias from free multipliers; otherwise the midpoint of the feasible band.
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double up_bound = -std::numeric_limits<double>::infinity();
    double low_bound = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < m2; ++t) {
        const double v = -sign_of(t) * grad[t];
        if (z[t] > 0.0 && z[t] < c) {
            free_sum += v;
            ++free_count;
        }
        const bool in_up = (t < n) ? z[t] < c : z[t] > 0.0;
        const bool in_low = (t < n) ? z[t] > 0.0 : z[t] < c;
        if (in_up) up_bound = std::max(up_bound, v);
        if (in_low) low_bound = std::min(low_bound, v);
    }
    const double bias = free_count > 0 ? free_sum / static_cast<double>(free_count)
                                       : 0.5 * (up_bound + low_bound);

    // Project the coefficients onto the feasible set exactly.
    std::vector<double> beta(n);
    for (std::size_t i = 0; i < n; ++i)
        beta[i] = std::clamp(z[i] - z[n + i], -c, c);
    double drift = 0.0;
    for (double b : beta) drift += b;
    if (drift != 0.0) {
        std::size_t k = 0;
        double slack = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = c - std::fabs(beta[i] - drift);
            if (s > slack) {
                slack = s;
                k = i;
            }
        }
        beta[k] = std::clamp(beta[k] - drift, -c, c);
    }

    SvrModel model;
    model.params = params;
    model.bias = bias;
    model.converged = converged;
    model.iterations = iter;
    model.kkt_violation = violation;
    model.dual_objective = -objective_min();
    for (std::size_t i = 0; i < n; ++i) {
        if (beta[i] != 0.0) {
            model.support_inputs.push_back(data.inputs[i]);
            model.dual_coeffs.push_back(beta[i]);
            model.support_indices.push_back(i);
        }
    }
    return model;
}

}  // namespace grancast

#endif
