#ifndef GRANCAST_METRICS_HPP
#define GRANCAST_METRICS_HPP

#include <cmath>
#include <span>
#include <stdexcept>

namespace grancast {

struct MetricsBundle {
    double mse = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double mape_percent = 0.0;  // mean absolute percentage error, in percent
};

/// MSE / RMSE / MAE on raw errors; MAPE relative to the observations and
/// reported in percent. Observations must be non-zero for MAPE to exist.
inline MetricsBundle evaluate(std::span<const double> predictions,
                              std::span<const double> observations) {
    if (predictions.size() != observations.size())
        throw std::invalid_argument("evaluate: predictions and observations differ in length");
    if (predictions.empty()) throw std::invalid_argument("evaluate: empty input");

    const double n = static_cast<double>(predictions.size());
    MetricsBundle m;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (observations[i] == 0.0)
            throw std::invalid_argument("evaluate: zero observation makes MAPE undefined");
        const double err = predictions[i] - observations[i];
        m.mse += err * err;
        m.mae += std::fabs(err);
        m.mape_percent += std::fabs(err / observations[i]);
    }
    m.mse /= n;
    m.mae /= n;
    m.mape_percent = 100.0 * m.mape_percent / n;
    m.rmse = std::sqrt(m.mse);
    return m;
}

}  // namespace grancast

#endif
