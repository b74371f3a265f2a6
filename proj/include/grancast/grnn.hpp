#ifndef GRANCAST_GRNN_HPP
#define GRANCAST_GRNN_HPP

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace grancast {

/// General regression neural network: normalized Gaussian-kernel regression
/// with one shared smooth factor.
struct GrnnModel {
    std::vector<std::vector<double>> train_inputs;
    std::vector<double> train_targets;
    double sigma = 0.1;

    void validate() const {
        if (train_inputs.empty() || train_inputs.size() != train_targets.size())
            throw std::invalid_argument("GRNN needs equally many inputs and targets");
        if (!(sigma > 0.0)) throw std::invalid_argument("GRNN smooth factor must be positive");
    }
};

/// y = sum_j w_j t_j / sum_j w_j with w_j = exp(-|x - x_j|^2 / (2 sigma^2)).
/// If every weight underflows to zero the nearest training target is returned.
inline double grnn_predict(const GrnnModel& model, std::span<const double> x) {
    model.validate();
    const std::size_t dim = model.train_inputs[0].size();
    if (x.size() != dim) throw std::invalid_argument("grnn_predict: dimension mismatch");

    const double denom = 2.0 * model.sigma * model.sigma;
    double wsum = 0.0, ysum = 0.0;
    double best_d2 = std::numeric_limits<double>::infinity();
    std::size_t nearest = 0;
    for (std::size_t j = 0; j < model.train_inputs.size(); ++j) {
        const auto& xj = model.train_inputs[j];
        if (xj.size() != dim) throw std::invalid_argument("grnn_predict: ragged training inputs");
        double d2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = x[i] - xj[i];
            d2 += d * d;
        }
        if (d2 < best_d2) {
            best_d2 = d2;
            nearest = j;
        }
        const double w = std::exp(-d2 / denom);
        wsum += w;
        ysum += w * model.train_targets[j];
    }
    if (wsum == 0.0) return model.train_targets[nearest];
    return ysum / wsum;
}

struct SigmaSearchResult {
    double best_sigma = 0.0;
    std::vector<std::pair<double, double>> curve;  // (sigma, loocv mse), sigma ascending
};

/// Leave-one-out grid search for the smooth factor: sigma walks from
/// `sigma_start` in steps of `step` up to `sigma_max`, stopping early after
/// five consecutive increases of the LOOCV error. Ties break toward the
/// smaller sigma.
inline SigmaSearchResult select_sigma(const std::vector<std::vector<double>>& inputs,
                                      const std::vector<double>& targets, double sigma_start = 0.1,
                                      double step = 0.1, double sigma_max = 2.0) {
    if (inputs.size() < 2 || inputs.size() != targets.size())
        throw std::invalid_argument("select_sigma: need at least two samples");
    if (!(sigma_start > 0.0) || !(step > 0.0))
        throw std::invalid_argument("select_sigma: sigma_start and step must be positive");
    if (sigma_start > sigma_max) throw std::invalid_argument("select_sigma: empty sigma grid");

    const std::size_t n = inputs.size();
    SigmaSearchResult out;
    double best_mse = std::numeric_limits<double>::infinity();
    int rises = 0;
    double prev_mse = std::numeric_limits<double>::infinity();

    for (int k = 0;; ++k) {
        const double sigma = sigma_start + step * k;
        if (sigma > sigma_max + 1e-12) break;

        GrnnModel fold;
        fold.sigma = sigma;
        fold.train_inputs.reserve(n - 1);
        fold.train_targets.reserve(n - 1);
        double sse = 0.0;
        for (std::size_t held = 0; held < n; ++held) {
            fold.train_inputs.clear();
            fold.train_targets.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (j == held) continue;
                fold.train_inputs.push_back(inputs[j]);
                fold.train_targets.push_back(targets[j]);
            }
            const double err = grnn_predict(fold, inputs[held]) - targets[held];
            sse += err * err;
        }
        const double mse = sse / static_cast<double>(n);
        out.curve.emplace_back(sigma, mse);
        if (mse < best_mse) {
            best_mse = mse;
            out.best_sigma = sigma;
        }
        rises = (mse > prev_mse) ? rises + 1 : 0;
        prev_mse = mse;
        if (rises >= 5) break;
    }
    return out;
}

}  // namespace grancast

#endif
