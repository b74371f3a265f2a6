#ifndef GRANCAST_SERIALIZE_HPP
#define GRANCAST_SERIALIZE_HPP

#include <json.hpp>

#include "grancast/arima.hpp"
#include "grancast/ga.hpp"
#include "grancast/grnn.hpp"
#include "grancast/metrics.hpp"
#include "grancast/pipeline.hpp"
#include "grancast/svr.hpp"
#include "grancast/timeseries.hpp"

// JSON mappings for the model documents the CLI reads and writes. nlohmann
// serializes doubles in shortest round-trip form, so save/load is lossless
// and byte-deterministic.

namespace grancast {

using json = nlohmann::json;

inline void to_json(json& j, const ScalingState& s) { j = json{{"min", s.min}, {"max", s.max}}; }
inline void from_json(const json& j, ScalingState& s) {
    j.at("min").get_to(s.min);
    j.at("max").get_to(s.max);
}

inline void to_json(json& j, const SvrParams& p) {
    j = json{{"c", p.c_penalty}, {"epsilon", p.epsilon}, {"gamma", p.gamma}};
}
inline void from_json(const json& j, SvrParams& p) {
    j.at("c").get_to(p.c_penalty);
    j.at("epsilon").get_to(p.epsilon);
    j.at("gamma").get_to(p.gamma);
}

inline void to_json(json& j, const SvrModel& m) {
    j = json{{"support_inputs", m.support_inputs},
             {"dual_coeffs", m.dual_coeffs},
             {"support_indices", m.support_indices},
             {"bias", m.bias},
             {"params", m.params},
             {"input_scaling", m.input_scaling},
             {"target_scaling", m.target_scaling},
             {"converged", m.converged}};
}
inline void from_json(const json& j, SvrModel& m) {
    j.at("support_inputs").get_to(m.support_inputs);
    j.at("dual_coeffs").get_to(m.dual_coeffs);
    j.at("support_indices").get_to(m.support_indices);
    j.at("bias").get_to(m.bias);
    j.at("params").get_to(m.params);
    j.at("input_scaling").get_to(m.input_scaling);
    j.at("target_scaling").get_to(m.target_scaling);
    j.at("converged").get_to(m.converged);
}

inline void to_json(json& j, const ArimaOrder& o) {
    j = json{{"p", o.p}, {"d", o.d}, {"q", o.q}};
}
inline void from_json(const json& j, ArimaOrder& o) {
    j.at("p").get_to(o.p);
    j.at("d").get_to(o.d);
    j.at("q").get_to(o.q);
}

inline void to_json(json& j, const ArimaModel& m) {
    j = json{{"order", m.order},
             {"intercept", m.intercept},
             {"ar_coeffs", m.ar_coeffs},
             {"ma_coeffs", m.ma_coeffs},
             {"sigma2", m.sigma2},
             {"residuals", m.residuals},
             {"n_obs", m.n_obs},
             {"sse", m.sse},
             {"converged", m.converged},
             {"history", m.history},
             {"integrate_tail", m.integrate_tail}};
}
inline void from_json(const json& j, ArimaModel& m) {
    j.at("order").get_to(m.order);
    j.at("intercept").get_to(m.intercept);
    j.at("ar_coeffs").get_to(m.ar_coeffs);
    j.at("ma_coeffs").get_to(m.ma_coeffs);
    j.at("sigma2").get_to(m.sigma2);
    j.at("residuals").get_to(m.residuals);
    j.at("n_obs").get_to(m.n_obs);
    j.at("sse").get_to(m.sse);
    j.at("converged").get_to(m.converged);
    j.at("history").get_to(m.history);
    j.at("integrate_tail").get_to(m.integrate_tail);
}

inline void to_json(json& j, const GaResult& r) {
    j = json{{"best_params", r.best_params},
             {"best_fitness", r.best_fitness},
             {"history", r.history}};
}
inline void from_json(const json& j, GaResult& r) {
    j.at("best_params").get_to(r.best_params);
    j.at("best_fitness").get_to(r.best_fitness);
    j.at("history").get_to(r.history);
}

inline void to_json(json& j, const GranuleSequences& g) {
    j = json{{"min", g.min_seq}, {"mean", g.mean_seq}, {"max", g.max_seq}};
}
inline void from_json(const json& j, GranuleSequences& g) {
    j.at("min").get_to(g.min_seq);
    j.at("mean").get_to(g.mean_seq);
    j.at("max").get_to(g.max_seq);
}

inline void to_json(json& j, const SequenceModel& s) {
    j = json{{"name", s.name},
             {"svr", s.svr},
             {"tuning", s.tuning},
             {"residuals", s.residuals}};
    if (s.resid_arima)
        j["resid_arima"] = *s.resid_arima;
    else
        j["resid_arima"] = nullptr;
}
inline void from_json(const json& j, SequenceModel& s) {
    j.at("name").get_to(s.name);
    j.at("svr").get_to(s.svr);
    j.at("tuning").get_to(s.tuning);
    j.at("residuals").get_to(s.residuals);
    if (j.contains("resid_arima") && !j.at("resid_arima").is_null())
        s.resid_arima = j.at("resid_arima").get<ArimaModel>();
    else
        s.resid_arima.reset();
}

inline void to_json(json& j, const HybridModel& m) {
    j = json{{"window_len", m.window_len},
             {"lag", m.lag},
             {"features", m.features == FeatureMode::lagged ? "lagged" : "cross"},
             {"scaling", m.scaling},
             {"train_granules", m.train_granules},
             {"sequences", json::array({m.sequences[0], m.sequences[1], m.sequences[2]})},
             {"seed", m.seed},
             {"warnings", m.warnings}};
}
inline void from_json(const json& j, HybridModel& m) {
    j.at("window_len").get_to(m.window_len);
    j.at("lag").get_to(m.lag);
    const std::string f = j.at("features").get<std::string>();
    m.features = f == "cross" ? FeatureMode::cross : FeatureMode::lagged;
    j.at("scaling").get_to(m.scaling);
    j.at("train_granules").get_to(m.train_granules);
    const auto& seqs = j.at("sequences");
    for (std::size_t i = 0; i < 3; ++i) seqs.at(i).get_to(m.sequences[i]);
    j.at("seed").get_to(m.seed);
    j.at("warnings").get_to(m.warnings);
}

inline void to_json(json& j, const MetricsBundle& m) {
    j = json{{"mse", m.mse}, {"rmse", m.rmse}, {"mae", m.mae}, {"mape_percent", m.mape_percent}};
}

inline void to_json(json& j, const SequenceForecast& s) {
    j = json{{"svr", s.svr}, {"resid_correction", s.resid_correction}, {"combined", s.combined}};
}

inline void to_json(json& j, const WindowForecast& w) {
    j = json{{"window_index", w.window_index},
             {"min", w.seq[0]},
             {"mean", w.seq[1]},
             {"max", w.seq[2]},
             {"ordering_ok", w.ordering_ok}};
}

inline void to_json(json& j, const ForecastReport& r) { j = json{{"windows", r.windows}}; }

inline void to_json(json& j, const AdfResult& r) {
    const char* spec = r.spec == AdfSpec::none
                           ? "none"
                           : (r.spec == AdfSpec::constant ? "constant" : "constant_trend");
    j = json{{"statistic", r.statistic},
             {"spec", spec},
             {"lags_used", r.lags_used},
             {"nobs", r.nobs},
             {"critical_values", {{"1%", r.crit_1}, {"5%", r.crit_5}, {"10%", r.crit_10}}}};
    if (r.reject_at)
        j["reject_at"] = *r.reject_at;
    else
        j["reject_at"] = nullptr;
}

inline void to_json(json& j, const LjungBoxRow& r) {
    j = json{{"lag", r.lag}, {"q_stat", r.q_stat}, {"p_value", r.p_value}};
}

}  // namespace grancast

#endif
