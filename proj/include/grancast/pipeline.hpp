#ifndef GRANCAST_PIPELINE_HPP
#define GRANCAST_PIPELINE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grancast/arima.hpp"
#include "grancast/ga.hpp"
#include "grancast/granulation.hpp"
#include "grancast/grnn.hpp"
#include "grancast/metrics.hpp"
#include "grancast/svr.hpp"
#include "grancast/timeseries.hpp"

namespace grancast {

/// How granule-sequence regressors are built: `lagged` embeds each sequence
/// on its own lags; `cross` feeds the (min, mean, max) triple of the trailing
/// windows to every sequence model.
enum class FeatureMode { lagged, cross };

/// How granule-level forecasts become monthly numbers.
enum class MonthlyMapping { mean, interpolate };

struct ArimaSettings {
    std::optional<ArimaOrder> order_min;
    std::optional<ArimaOrder> order_mean;
    std::optional<ArimaOrder> order_max;
    std::optional<ArimaOrder> order_raw;
    int p_max = 3;
    int q_max = 3;
    int d = 0;
};

struct GrnnSettings {
    double sigma_start = 0.1;
    double sigma_step = 0.1;
    double sigma_max = 2.0;
};

struct ExperimentConfig {
    std::size_t window_len = 3;
    std::size_t lag = 3;
    FeatureMode features = FeatureMode::lagged;
    GaConfig ga;
    ArimaSettings arima;
    GrnnSettings grnn;
    std::optional<YearMonth> train_end;  // default: hold out the last window
    MonthlyMapping monthly_mapping = MonthlyMapping::mean;
    std::uint64_t seed = 424242;
};

struct SequenceModel {
    std::string name;
    SvrModel svr;
    GaResult tuning;
    std::vector<double> residuals;          // observed - fitted, original scale
    std::optional<ArimaModel> resid_arima;  // absent => zero correction
};

struct HybridModel {
    std::size_t window_len = 3;
    std::size_t lag = 3;
    FeatureMode features = FeatureMode::lagged;
    ScalingState scaling;
    GranuleSequences train_granules;  // raw training sequences
    std::array<SequenceModel, 3> sequences;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

namespace detail {

inline SupervisedSet sequence_supervised(const std::array<std::vector<double>, 3>& scaled,
                                         std::size_t iseq, std::size_t lag, FeatureMode mode) {
    if (mode == FeatureMode::lagged)
        return make_supervised(scaled[iseq], lag);
    return make_supervised_joint({std::span<const double>(scaled[0]), std::span<const double>(scaled[1]),
                                  std::span<const double>(scaled[2])},
                                 scaled[iseq], lag);
}

inline std::vector<double> feature_row(const std::array<std::vector<double>, 3>& hist,
                                       std::size_t iseq, std::size_t lag, FeatureMode mode) {
    std::vector<double> x;
    const std::size_t len = hist[iseq].size();
    if (mode == FeatureMode::lagged) {
        x.assign(hist[iseq].end() - static_cast<std::ptrdiff_t>(lag), hist[iseq].end());
    } else {
        x.reserve(3 * lag);
        for (std::size_t t = len - lag; t < len; ++t)
            for (std::size_t c = 0; c < 3; ++c) x.push_back(hist[c][t]);
    }
    return x;
}

}  // namespace detail

/// Fits the full hybrid: granulation, GA-tuned SVR per sequence, and an ARIMA
/// model on each sequence's in-sample residuals. Deterministic for a fixed
/// config seed. ARIMA failures degrade to a zero-correction model with a
/// warning rather than aborting the fit.
inline HybridModel fit_hybrid(const TimeSeries& train, const ExperimentConfig& config) {
    HybridModel model;
    model.window_len = config.window_len;
    model.lag = config.lag;
    model.features = config.features;
    model.seed = config.seed;

    const auto values = train.values();
    const Partition part = partition(std::span<const double>(values), config.window_len);
    if (part.dropped > 0)
        model.warnings.push_back("granulation dropped " + std::to_string(part.dropped) +
                                 " trailing value(s) that did not fill a window");
    model.train_granules = granulate_values(std::span<const double>(values), config.window_len);
    const std::size_t windows = model.train_granules.size();
    if (windows < config.lag + 2)
        throw std::invalid_argument("fit_hybrid: training series yields too few windows (" +
                                    std::to_string(windows) + ") for lag " + std::to_string(config.lag));

    model.scaling = scale_fit(std::span<const double>(values));
    std::array<std::vector<double>, 3> scaled;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& raw = model.train_granules.sequence(i);
        scaled[i].resize(raw.size());
        for (std::size_t t = 0; t < raw.size(); ++t) scaled[i][t] = scale_apply(model.scaling, raw[t]);
    }

    const std::array<std::optional<ArimaOrder>, 3> fixed_orders{config.arima.order_min,
                                                                config.arima.order_mean,
                                                                config.arima.order_max};

    for (std::size_t iseq = 0; iseq < 3; ++iseq) {
        SequenceModel& sm = model.sequences[iseq];
        sm.name = kSequenceNames[iseq];

        const SupervisedSet sup =
            detail::sequence_supervised(scaled, iseq, config.lag, config.features);

        GaConfig ga = config.ga;
        ga.seed = detail::mix_seed(config.seed, iseq);
        sm.tuning = evolve(sup, ga);

        sm.svr = train_svr(sup, sm.tuning.best_params, ga.svr_tol, ga.svr_max_iter);
        if (!sm.svr.converged)
            model.warnings.push_back(sm.name + ": SVR training hit the iteration cap");
        sm.svr.input_scaling = model.scaling;
        sm.svr.target_scaling = model.scaling;

        const auto& raw_seq = model.train_granules.sequence(iseq);
        sm.residuals.reserve(windows - config.lag);
        for (std::size_t t = config.lag; t < windows; ++t) {
            const double fitted = scale_invert(model.scaling,
                                               predict_scaled(sm.svr, sup.inputs[t - config.lag]));
            sm.residuals.push_back(raw_seq[t] - fitted);
        }

        try {
            ArimaOrder order;
            if (fixed_orders[iseq]) {
                order = *fixed_orders[iseq];
            } else {
                order = select_order(sm.residuals, config.arima.p_max, config.arima.q_max,
                                     config.arima.d, detail::mix_seed(config.seed, 8 + iseq))
                            .best;
            }
            sm.resid_arima =
                estimate_arma(sm.residuals, order, detail::mix_seed(config.seed, 16 + iseq));
        } catch (const std::exception& e) {
            sm.resid_arima.reset();
            model.warnings.push_back(sm.name + ": residual ARIMA failed (" + e.what() +
                                     "); using zero correction");
        }
    }
    return model;
}

struct SequenceForecast {
    double svr = 0.0;               // GA-SVR layer, original scale
    double resid_correction = 0.0;  // ARIMA forecast of the SVR residual
    double combined = 0.0;          // svr + resid_correction, exact sum
};

struct WindowForecast {
    std::size_t window_index = 0;  // 0 = first window after training
    std::array<SequenceForecast, 3> seq;
    bool ordering_ok = true;  // combined min <= mean <= max
};

struct ForecastReport {
    std::vector<WindowForecast> windows;
};

/// Recursive multi-window forecast: SVR forecasts feed back into the lag
/// vectors, residual corrections come from the ARIMA models in dynamic mode,
/// and the combined layer is their exact sum.
inline ForecastReport forecast_hybrid(const HybridModel& model, std::size_t horizon_windows) {
    if (horizon_windows < 1) throw std::invalid_argument("forecast_hybrid: horizon must be >= 1");

    std::array<std::vector<double>, 3> hist;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& raw = model.train_granules.sequence(i);
        hist[i].resize(raw.size());
        for (std::size_t t = 0; t < raw.size(); ++t) hist[i][t] = scale_apply(model.scaling, raw[t]);
    }

    std::array<std::vector<double>, 3> svr_fc;
    for (std::size_t s = 0; s < horizon_windows; ++s) {
        std::array<double, 3> step;
        for (std::size_t i = 0; i < 3; ++i) {
            const auto x = detail::feature_row(hist, i, model.lag, model.features);
            step[i] = predict_scaled(model.sequences[i].svr, x);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            hist[i].push_back(step[i]);
            svr_fc[i].push_back(scale_invert(model.scaling, step[i]));
        }
    }

    std::array<std::vector<double>, 3> corrections;
    for (std::size_t i = 0; i < 3; ++i) {
        if (model.sequences[i].resid_arima) {
            corrections[i] = forecast(*model.sequences[i].resid_arima,
                                      static_cast<int>(horizon_windows), ForecastMode::dynamic);
        } else {
            corrections[i].assign(horizon_windows, 0.0);
        }
    }

    ForecastReport report;
    report.windows.resize(horizon_windows);
    for (std::size_t s = 0; s < horizon_windows; ++s) {
        WindowForecast& wf = report.windows[s];
        wf.window_index = s;
        for (std::size_t i = 0; i < 3; ++i) {
            wf.seq[i].svr = svr_fc[i][s];
            wf.seq[i].resid_correction = corrections[i][s];
            wf.seq[i].combined = wf.seq[i].svr + wf.seq[i].resid_correction;
        }
        wf.ordering_ok = wf.seq[0].combined <= wf.seq[1].combined &&
                         wf.seq[1].combined <= wf.seq[2].combined;
    }
    return report;
}

enum class ForecastLayer { svr_only, combined };

/// Expands window-level forecasts to monthly values. `mean` assigns each
/// month the window's mean-sequence forecast; `interpolate` walks the
/// (min, mean, max) triple linearly across the window's months.
inline std::vector<double> monthly_forecast(const ForecastReport& report, std::size_t window_len,
                                            MonthlyMapping mapping, std::size_t months,
                                            ForecastLayer layer) {
    if (window_len < 1) throw std::invalid_argument("monthly_forecast: window_len must be >= 1");
    if (months > report.windows.size() * window_len)
        throw std::invalid_argument("monthly_forecast: horizon does not cover requested months");
    const auto layer_value = [&](const SequenceForecast& sf) {
        return layer == ForecastLayer::combined ? sf.combined : sf.svr;
    };
    std::vector<double> out(months);
    for (std::size_t m = 0; m < months; ++m) {
        const WindowForecast& wf = report.windows[m / window_len];
        if (mapping == MonthlyMapping::mean || window_len == 1) {
            out[m] = layer_value(wf.seq[1]);
            continue;
        }
        const double a = layer_value(wf.seq[0]);
        const double mid = layer_value(wf.seq[1]);
        const double b = layer_value(wf.seq[2]);
        const double frac =
            static_cast<double>(m % window_len) / static_cast<double>(window_len - 1);
        out[m] = frac <= 0.5 ? a + 2.0 * frac * (mid - a) : mid + (2.0 * frac - 1.0) * (b - mid);
    }
    return out;
}

struct ModelResult {
    std::string name;
    std::vector<double> monthly;
    MetricsBundle metrics;
};

/// Metrics assembly shared by the comparison report: one row per model, each
/// scored against the same observations.
inline std::vector<ModelResult> assemble_comparison(
    const std::vector<std::pair<std::string, std::vector<double>>>& predictions,
    std::span<const double> actuals) {
    std::vector<ModelResult> rows;
    rows.reserve(predictions.size());
    for (const auto& [name, preds] : predictions) {
        ModelResult r;
        r.name = name;
        r.monthly = preds;
        r.metrics = evaluate(preds, actuals);
        rows.push_back(std::move(r));
    }
    return rows;
}

struct GranuleEval {
    std::string model;
    MetricsBundle metrics;  // pooled over test windows and the three sequences
};

struct ComparisonReport {
    std::vector<ModelResult> models;  // arima, grnn, ga_svr, hybrid
    std::vector<YearMonth> test_months;
    std::vector<double> test_values;
    ForecastReport hybrid_windows;
    GranuleSequences test_granules;
    std::vector<GranuleEval> granule_metrics;
    SigmaSearchResult grnn_sigma;
    ArimaOrder raw_order;
    HybridModel hybrid;
    std::vector<std::string> warnings;
};

/// Fits and forecasts the four comparison models on one split: raw-series
/// ARIMA (dynamic), GRNN on the lag-embedded scaled raw series, the GA-SVR
/// layer of the hybrid, and the full hybrid.
inline ComparisonReport compare_models(const TimeSeries& series, const ExperimentConfig& config) {
    SplitSpec spec;
    if (config.train_end) {
        spec.train_end = *config.train_end;
    } else {
        if (series.size() <= config.window_len)
            throw std::invalid_argument("compare_models: series too short to hold out one window");
        spec.train_end = series[series.size() - config.window_len - 1].when;
    }
    const auto [train, test] = split(series, spec);

    ComparisonReport report;
    for (const auto& p : test.points()) {
        report.test_months.push_back(p.when);
        report.test_values.push_back(p.value);
    }
    const std::size_t months = test.size();
    const std::size_t horizon_windows = (months + config.window_len - 1) / config.window_len;

    // Hybrid and its GA-SVR layer.
    report.hybrid = fit_hybrid(train, config);
    report.hybrid_windows = forecast_hybrid(report.hybrid, horizon_windows);
    const auto hybrid_monthly = monthly_forecast(report.hybrid_windows, config.window_len,
                                                 config.monthly_mapping, months,
                                                 ForecastLayer::combined);
    const auto gasvr_monthly = monthly_forecast(report.hybrid_windows, config.window_len,
                                                config.monthly_mapping, months,
                                                ForecastLayer::svr_only);

    // Raw-series ARIMA, dynamic multi-step forecast.
    const auto train_values = train.values();
    ArimaOrder raw_order;
    if (config.arima.order_raw) {
        raw_order = *config.arima.order_raw;
    } else {
        raw_order = select_order(train_values, config.arima.p_max, config.arima.q_max,
                                 config.arima.d, detail::mix_seed(config.seed, 32))
                        .best;
    }
    report.raw_order = raw_order;
    const ArimaModel raw_arima =
        estimate_arma(train_values, raw_order, detail::mix_seed(config.seed, 33));
    const auto arima_monthly =
        forecast(raw_arima, static_cast<int>(months), ForecastMode::dynamic);

    // GRNN on the scaled raw monthly series, recursive forecast.
    std::vector<double> scaled_values(train_values.size());
    for (std::size_t i = 0; i < train_values.size(); ++i)
        scaled_values[i] = scale_apply(report.hybrid.scaling, train_values[i]);
    const SupervisedSet grnn_set = make_supervised(scaled_values, config.lag);
    report.grnn_sigma = select_sigma(grnn_set.inputs, grnn_set.targets, config.grnn.sigma_start,
                                     config.grnn.sigma_step, config.grnn.sigma_max);
    GrnnModel grnn{grnn_set.inputs, grnn_set.targets, report.grnn_sigma.best_sigma};
    std::vector<double> grnn_monthly;
    {
        std::vector<double> hist = scaled_values;
        for (std::size_t s = 0; s < months; ++s) {
            const std::vector<double> x(hist.end() - static_cast<std::ptrdiff_t>(config.lag),
                                        hist.end());
            const double f = grnn_predict(grnn, x);
            hist.push_back(f);
            grnn_monthly.push_back(scale_invert(report.hybrid.scaling, f));
        }
    }

    report.models = assemble_comparison({{"arima", arima_monthly},
                                         {"grnn", grnn_monthly},
                                         {"ga_svr", gasvr_monthly},
                                         {"hybrid", hybrid_monthly}},
                                        report.test_values);
    report.warnings = report.hybrid.warnings;

    // Granule-level evaluation over complete test windows.
    const auto test_values_vec = test.values();
    if (test_values_vec.size() >= config.window_len) {
        report.test_granules =
            granulate_values(std::span<const double>(test_values_vec), config.window_len);
        if (test_values_vec.size() % config.window_len != 0)
            report.warnings.push_back("granule comparison drops a partial trailing test window");
        std::vector<double> actual, hybrid_g, gasvr_g;
        for (std::size_t w = 0; w < report.test_granules.size(); ++w) {
            for (std::size_t i = 0; i < 3; ++i) {
                actual.push_back(report.test_granules.sequence(i)[w]);
                hybrid_g.push_back(report.hybrid_windows.windows[w].seq[i].combined);
                gasvr_g.push_back(report.hybrid_windows.windows[w].seq[i].svr);
            }
        }
        report.granule_metrics.push_back({"ga_svr", evaluate(gasvr_g, actual)});
        report.granule_metrics.push_back({"hybrid", evaluate(hybrid_g, actual)});
    } else {
        report.warnings.push_back("test span shorter than one window; granule comparison skipped");
    }
    return report;
}

}  // namespace grancast

#endif
