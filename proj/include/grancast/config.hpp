#ifndef GRANCAST_CONFIG_HPP
#define GRANCAST_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "grancast/pipeline.hpp"

namespace grancast {

/// Resolved batch configuration: a flat key/value document. File values are
/// overridden by flags; everything has a documented default. The default seed
/// is a fixed constant so runs reproduce without any flags.
struct CliConfig {
    std::string input;        // series CSV; required by every subcommand
    std::string out = "out";  // output directory
    std::string model;        // model.json path (forecast subcommand)
    std::uint64_t seed = 424242;
    std::size_t window_len = 3;
    std::size_t lag = 3;
    std::string features = "lagged";  // lagged | cross
    std::size_t horizon = 1;          // forecast horizon, in windows
    std::string train_end;            // "YYYY-MM"; empty = hold out the last window
    std::string monthly_mapping = "mean";  // mean | interpolate

    // Genetic algorithm.
    std::size_t population = 20;
    std::size_t generations = 200;
    double crossover_prob = 0.8;
    double mutation_prob = 0.05;
    std::size_t bits_per_param = 16;
    std::size_t folds = 5;
    std::string fold_mode = "random";  // random | blocked
    double c_min = 0.01, c_max = 100.0;
    double gamma_min = 0.01, gamma_max = 100.0;
    double eps_min = 0.001, eps_max = 1.0;
    double svr_tol = 1e-3;

    // ARIMA.
    int p_max = 3, q_max = 3, d = 0;
    std::string orders;      // "p,d,q" or "p,d,q;p,d,q;p,d,q" for min/mean/max residuals
    std::string orders_raw;  // "p,d,q" for the raw-series comparison model

    // GRNN.
    double sigma_start = 0.1, sigma_step = 0.1, sigma_max = 2.0;

    // Diagnostics.
    std::string adf_spec = "constant";  // none | constant | constant_trend
    int lb_lags = 12;
    int acf_lags = 20;

    int verbosity = 1;
};

namespace detail {

inline ArimaOrder parse_order(const std::string& text) {
    ArimaOrder o;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> o.p >> c1 >> o.d >> c2 >> o.q) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof())
        throw std::invalid_argument("expected order 'p,d,q', got '" + text + "'");
    o.validate();
    return o;
}

template <typename T>
void read_key(const nlohmann::json& doc, const char* key, T& out) {
    if (!doc.contains(key)) return;
    try {
        doc.at(key).get_to(out);
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument(std::string("config key '") + key + "' has the wrong type");
    }
}

}  // namespace detail

inline nlohmann::json config_to_json(const CliConfig& c) {
    return nlohmann::json{{"input", c.input},
                          {"out", c.out},
                          {"model", c.model},
                          {"seed", c.seed},
                          {"window_len", c.window_len},
                          {"lag", c.lag},
                          {"features", c.features},
                          {"horizon", c.horizon},
                          {"train_end", c.train_end},
                          {"monthly_mapping", c.monthly_mapping},
                          {"population", c.population},
                          {"generations", c.generations},
                          {"crossover_prob", c.crossover_prob},
                          {"mutation_prob", c.mutation_prob},
                          {"bits_per_param", c.bits_per_param},
                          {"folds", c.folds},
                          {"fold_mode", c.fold_mode},
                          {"c_min", c.c_min},
                          {"c_max", c.c_max},
                          {"gamma_min", c.gamma_min},
                          {"gamma_max", c.gamma_max},
                          {"eps_min", c.eps_min},
                          {"eps_max", c.eps_max},
                          {"svr_tol", c.svr_tol},
                          {"p_max", c.p_max},
                          {"q_max", c.q_max},
                          {"d", c.d},
                          {"orders", c.orders},
                          {"orders_raw", c.orders_raw},
                          {"sigma_start", c.sigma_start},
                          {"sigma_step", c.sigma_step},
                          {"sigma_max", c.sigma_max},
                          {"adf_spec", c.adf_spec},
                          {"lb_lags", c.lb_lags},
                          {"acf_lags", c.acf_lags},
                          {"verbosity", c.verbosity}};
}

/// Canonical dump: sorted keys, two-space indent, trailing newline. Feeding
/// the output back through parse_config reproduces it byte for byte.
inline std::string dump_config(const CliConfig& c) { return config_to_json(c).dump(2) + "\n"; }

/// Merges a flat JSON config document with flag overrides (also a flat JSON
/// object); flags win. Unknown keys and type mismatches are rejected.
inline CliConfig parse_config(const nlohmann::json& file_doc, const nlohmann::json& overrides,
                              bool require_input = true) {
    CliConfig cfg;
    const nlohmann::json known = config_to_json(cfg);

    for (const nlohmann::json* doc : {&file_doc, &overrides}) {
        if (doc->is_null()) continue;
        if (!doc->is_object()) throw std::invalid_argument("config must be a flat JSON object");
        for (const auto& [key, value] : doc->items()) {
            (void)value;
            if (!known.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
        }
        detail::read_key(*doc, "input", cfg.input);
        detail::read_key(*doc, "out", cfg.out);
        detail::read_key(*doc, "model", cfg.model);
        detail::read_key(*doc, "seed", cfg.seed);
        detail::read_key(*doc, "window_len", cfg.window_len);
        detail::read_key(*doc, "lag", cfg.lag);
        detail::read_key(*doc, "features", cfg.features);
        detail::read_key(*doc, "horizon", cfg.horizon);
        detail::read_key(*doc, "train_end", cfg.train_end);
        detail::read_key(*doc, "monthly_mapping", cfg.monthly_mapping);
        detail::read_key(*doc, "population", cfg.population);
        detail::read_key(*doc, "generations", cfg.generations);
        detail::read_key(*doc, "crossover_prob", cfg.crossover_prob);
        detail::read_key(*doc, "mutation_prob", cfg.mutation_prob);
        detail::read_key(*doc, "bits_per_param", cfg.bits_per_param);
        detail::read_key(*doc, "folds", cfg.folds);
        detail::read_key(*doc, "fold_mode", cfg.fold_mode);
        detail::read_key(*doc, "c_min", cfg.c_min);
        detail::read_key(*doc, "c_max", cfg.c_max);
        detail::read_key(*doc, "gamma_min", cfg.gamma_min);
        detail::read_key(*doc, "gamma_max", cfg.gamma_max);
        detail::read_key(*doc, "eps_min", cfg.eps_min);
        detail::read_key(*doc, "eps_max", cfg.eps_max);
        detail::read_key(*doc, "svr_tol", cfg.svr_tol);
        detail::read_key(*doc, "p_max", cfg.p_max);
        detail::read_key(*doc, "q_max", cfg.q_max);
        detail::read_key(*doc, "d", cfg.d);
        detail::read_key(*doc, "orders", cfg.orders);
        detail::read_key(*doc, "orders_raw", cfg.orders_raw);
        detail::read_key(*doc, "sigma_start", cfg.sigma_start);
        detail::read_key(*doc, "sigma_step", cfg.sigma_step);
        detail::read_key(*doc, "sigma_max", cfg.sigma_max);
        detail::read_key(*doc, "adf_spec", cfg.adf_spec);
        detail::read_key(*doc, "lb_lags", cfg.lb_lags);
        detail::read_key(*doc, "acf_lags", cfg.acf_lags);
        detail::read_key(*doc, "verbosity", cfg.verbosity);
    }

    if (require_input && cfg.input.empty())
        throw std::invalid_argument("missing input path (set the 'input' key or pass --input)");

    if (cfg.monthly_mapping != "mean" && cfg.monthly_mapping != "interpolate")
        throw std::invalid_argument("monthly_mapping must be 'mean' or 'interpolate'");
    if (cfg.features != "lagged" && cfg.features != "cross")
        throw std::invalid_argument("features must be 'lagged' or 'cross'");
    if (cfg.fold_mode != "random" && cfg.fold_mode != "blocked")
        throw std::invalid_argument("fold_mode must be 'random' or 'blocked'");
    if (cfg.adf_spec != "none" && cfg.adf_spec != "constant" && cfg.adf_spec != "constant_trend")
        throw std::invalid_argument("adf_spec must be none, constant, or constant_trend");
    if (!cfg.orders.empty()) {
        std::size_t triples = 0;
        std::stringstream ss(cfg.orders);
        std::string part;
        while (std::getline(ss, part, ';')) {
            detail::parse_order(part);
            ++triples;
        }
        if (triples != 1 && triples != 3)
            throw std::invalid_argument("orders expects one triple or three ';'-separated triples");
    }
    if (!cfg.orders_raw.empty()) detail::parse_order(cfg.orders_raw);
    return cfg;
}

/// Expands the flat document into the pipeline's experiment configuration.
inline ExperimentConfig experiment_from_config(const CliConfig& c) {
    ExperimentConfig e;
    e.window_len = c.window_len;
    e.lag = c.lag;
    e.features = c.features == "cross" ? FeatureMode::cross : FeatureMode::lagged;
    e.monthly_mapping =
        c.monthly_mapping == "interpolate" ? MonthlyMapping::interpolate : MonthlyMapping::mean;
    e.seed = c.seed;
    if (!c.train_end.empty()) e.train_end = YearMonth::parse(c.train_end);

    e.ga.population = c.population;
    e.ga.generations = c.generations;
    e.ga.crossover_prob = c.crossover_prob;
    e.ga.mutation_prob = c.mutation_prob;
    e.ga.bits_per_param = c.bits_per_param;
    e.ga.folds = c.folds;
    e.ga.fold_mode = c.fold_mode == "blocked" ? FoldMode::blocked : FoldMode::random;
    e.ga.c_range = {c.c_min, c.c_max, ParamScale::log};
    e.ga.gamma_range = {c.gamma_min, c.gamma_max, ParamScale::log};
    e.ga.eps_range = {c.eps_min, c.eps_max, ParamScale::linear};
    e.ga.svr_tol = c.svr_tol;
    e.ga.validate();

    e.arima.p_max = c.p_max;
    e.arima.q_max = c.q_max;
    e.arima.d = c.d;
    if (!c.orders.empty()) {
        std::vector<ArimaOrder> parsed;
        std::stringstream ss(c.orders);
        std::string part;
        while (std::getline(ss, part, ';')) parsed.push_back(detail::parse_order(part));
        if (parsed.size() == 1) {
            e.arima.order_min = e.arima.order_mean = e.arima.order_max = parsed[0];
        } else if (parsed.size() == 3) {
            e.arima.order_min = parsed[0];
            e.arima.order_mean = parsed[1];
            e.arima.order_max = parsed[2];
        } else {
            throw std::invalid_argument("orders expects one triple or three ';'-separated triples");
        }
    }
    if (!c.orders_raw.empty()) e.arima.order_raw = detail::parse_order(c.orders_raw);

    e.grnn.sigma_start = c.sigma_start;
    e.grnn.sigma_step = c.sigma_step;
    e.grnn.sigma_max = c.sigma_max;
    return e;
}

}  // namespace grancast

#endif
