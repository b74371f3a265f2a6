// grancast batch CLI: granulate | tune | fit | forecast | compare | diagnose.
// Every run writes its outputs plus a run.json manifest into --out.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "grancast/config.hpp"
#include "grancast/serialize.hpp"
#include "grancast/svg.hpp"

namespace fs = std::filesystem;
using grancast::json;

namespace {

struct RunContext {
    grancast::CliConfig cfg;
    fs::path out_dir;
    std::vector<std::string> warnings;
    std::vector<std::string> outputs;
    int verbosity = 1;

    void note(const std::string& msg) {
        if (verbosity > 0) std::cout << msg << '\n';
    }

    void write_file(const std::string& name, const std::string& content) {
        const fs::path path = out_dir / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
        f << content;
        outputs.push_back(name);
        note("wrote " + path.string());
    }
};

std::string csv_num(double v) { return grancast::detail::format_value(v); }

// Accepts either a monthly series CSV or a plain numeric CSV (optional index
// column); used by `diagnose` so residual files can be fed back in.
std::vector<double> load_numeric_csv(const std::string& path) {
    try {
        return grancast::load_csv(path).values();
    } catch (const std::exception&) {
        // fall through to plain numeric parsing
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
        double v = 0.0;
        if (!grancast::detail::parse_value(field, v)) {
            if (line_no == 1) continue;  // header
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": malformed value '" + field + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) throw std::runtime_error(path + ": no numeric rows");
    return values;
}

std::vector<std::pair<double, double>> indexed(const std::vector<double>& v, double x0 = 0.0) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        pts.emplace_back(x0 + static_cast<double>(i), v[i]);
    return pts;
}

void run_granulate(RunContext& ctx) {
    const auto series = grancast::load_csv(ctx.cfg.input);
    const auto part = grancast::partition(series, ctx.cfg.window_len);
    if (part.dropped > 0)
        ctx.warnings.push_back("dropped " + std::to_string(part.dropped) +
                               " trailing value(s) that did not fill a window");
    const auto seqs = grancast::granulate_series(series, ctx.cfg.window_len);
    std::string csv = "window_index,a,m,b\n";
    for (std::size_t w = 0; w < seqs.size(); ++w) {
        csv += std::to_string(w) + ',' + csv_num(seqs.min_seq[w]) + ',' +
               csv_num(seqs.mean_seq[w]) + ',' + csv_num(seqs.max_seq[w]) + '\n';
    }
    ctx.write_file("granules.csv", csv);

    std::vector<grancast::Trace> traces{{"min", indexed(seqs.min_seq)},
                                        {"mean", indexed(seqs.mean_seq)},
                                        {"max", indexed(seqs.max_seq)}};
    ctx.write_file("granules.svg", grancast::render_plot(traces, "granule sequences"));
}

void run_tune(RunContext& ctx) {
    const auto series = grancast::load_csv(ctx.cfg.input);
    const auto experiment = grancast::experiment_from_config(ctx.cfg);
    const auto values = series.values();
    const auto seqs = grancast::granulate_values(values, experiment.window_len);
    const auto scaling = grancast::scale_fit(values);

    std::array<std::vector<double>, 3> scaled;
    for (std::size_t i = 0; i < 3; ++i) {
        for (double v : seqs.sequence(i)) scaled[i].push_back(grancast::scale_apply(scaling, v));
    }

    json doc;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto sup =
            grancast::detail::sequence_supervised(scaled, i, experiment.lag, experiment.features);
        grancast::GaConfig ga = experiment.ga;
        ga.seed = grancast::detail::mix_seed(experiment.seed, i);
        const auto result = grancast::evolve(sup, ga);
        doc[grancast::kSequenceNames[i]] = result;
        ctx.write_file(std::string("ga_convergence_") + grancast::kSequenceNames[i] + ".svg",
                       grancast::render_plot({{"best CV MSE", indexed(result.history)}},
                                             std::string("GA convergence (") +
                                                 grancast::kSequenceNames[i] + ")"));
        ctx.note(std::string(grancast::kSequenceNames[i]) +
                 ": cv_mse=" + std::to_string(result.best_fitness));
    }
    ctx.write_file("tuning.json", doc.dump(2) + "\n");
}

void run_fit(RunContext& ctx) {
    auto series = grancast::load_csv(ctx.cfg.input);
    const auto experiment = grancast::experiment_from_config(ctx.cfg);
    if (experiment.train_end) {
        auto [train, test] = grancast::split(series, {*experiment.train_end});
        ctx.note("training on " + std::to_string(train.size()) + " months, holding out " +
                 std::to_string(test.size()));
        series = std::move(train);
    }
    const auto model = grancast::fit_hybrid(series, experiment);
    for (const auto& w : model.warnings) ctx.warnings.push_back(w);

    ctx.write_file("model.json", json(model).dump(2) + "\n");

    // Residuals per window (windows before `lag` have no fitted value).
    std::string csv = "window_index,min,mean,max\n";
    for (std::size_t r = 0; r < model.sequences[0].residuals.size(); ++r) {
        csv += std::to_string(r + model.lag);
        for (std::size_t i = 0; i < 3; ++i) csv += ',' + csv_num(model.sequences[i].residuals[r]);
        csv += '\n';
    }
    ctx.write_file("residuals.csv", csv);

    for (std::size_t i = 0; i < 3; ++i) {
        const auto& raw = model.train_granules.sequence(i);
        std::vector<double> fitted;
        for (std::size_t r = 0; r < model.sequences[i].residuals.size(); ++r)
            fitted.push_back(raw[model.lag + r] - model.sequences[i].residuals[r]);
        std::vector<grancast::Trace> traces{
            {"actual", indexed(raw)},
            {"fitted", indexed(fitted, static_cast<double>(model.lag))}};
        ctx.write_file(std::string("fit_") + grancast::kSequenceNames[i] + ".svg",
                       grancast::render_plot(traces, std::string("GA-SVR fit (") +
                                                         grancast::kSequenceNames[i] + ")"));
    }
}

void run_forecast(RunContext& ctx) {
    if (ctx.cfg.model.empty())
        throw std::invalid_argument("forecast requires --model pointing at a model.json");
    std::ifstream in(ctx.cfg.model);
    if (!in) throw std::runtime_error("cannot open '" + ctx.cfg.model + "'");
    grancast::HybridModel model = json::parse(in).get<grancast::HybridModel>();

    const auto report = grancast::forecast_hybrid(model, ctx.cfg.horizon);
    json doc = report;
    doc["horizon_windows"] = ctx.cfg.horizon;
    doc["window_len"] = model.window_len;
    doc["monthly_mapping"] = ctx.cfg.monthly_mapping;
    const auto mapping = ctx.cfg.monthly_mapping == "interpolate"
                             ? grancast::MonthlyMapping::interpolate
                             : grancast::MonthlyMapping::mean;
    doc["monthly_combined"] =
        grancast::monthly_forecast(report, model.window_len, mapping,
                                   ctx.cfg.horizon * model.window_len,
                                   grancast::ForecastLayer::combined);
    ctx.write_file("forecast.json", doc.dump(2) + "\n");

    for (std::size_t i = 0; i < 3; ++i) {
        const auto& raw = model.train_granules.sequence(i);
        std::vector<double> combined, svr_layer;
        for (const auto& w : report.windows) {
            combined.push_back(w.seq[i].combined);
            svr_layer.push_back(w.seq[i].svr);
        }
        const double x0 = static_cast<double>(raw.size());
        std::vector<grancast::Trace> traces{{"history", indexed(raw)},
                                            {"svr", indexed(svr_layer, x0)},
                                            {"combined", indexed(combined, x0)}};
        ctx.write_file(std::string("forecast_") + grancast::kSequenceNames[i] + ".svg",
                       grancast::render_plot(traces, std::string("forecast (") +
                                                         grancast::kSequenceNames[i] + ")"));
    }

    for (const auto& w : report.windows)
        if (!w.ordering_ok)
            ctx.warnings.push_back("window " + std::to_string(w.window_index) +
                                   ": combined forecasts violate min <= mean <= max");
}

void run_compare(RunContext& ctx) {
    const auto series = grancast::load_csv(ctx.cfg.input);
    const auto experiment = grancast::experiment_from_config(ctx.cfg);
    const auto report = grancast::compare_models(series, experiment);
    for (const auto& w : report.warnings) ctx.warnings.push_back(w);

    std::string metrics_csv = "model,mse,rmse,mae,mape_percent\n";
    for (const auto& row : report.models) {
        metrics_csv += row.name + ',' + csv_num(row.metrics.mse) + ',' + csv_num(row.metrics.rmse) +
                       ',' + csv_num(row.metrics.mae) + ',' + csv_num(row.metrics.mape_percent) +
                       '\n';
    }
    ctx.write_file("comparison.csv", metrics_csv);

    std::string pred_csv = "model,month,prediction,actual\n";
    for (const auto& row : report.models) {
        for (std::size_t m = 0; m < row.monthly.size(); ++m) {
            pred_csv += row.name + ',' + report.test_months[m].str() + ',' +
                        csv_num(row.monthly[m]) + ',' + csv_num(report.test_values[m]) + '\n';
        }
    }
    ctx.write_file("predictions.csv", pred_csv);

    std::string gran_csv = "window_index,sequence,svr,resid_correction,combined,actual\n";
    for (std::size_t w = 0; w < report.test_granules.size(); ++w) {
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& sf = report.hybrid_windows.windows[w].seq[i];
            gran_csv += std::to_string(w) + ',' + grancast::kSequenceNames[i] + ',' +
                        csv_num(sf.svr) + ',' + csv_num(sf.resid_correction) + ',' +
                        csv_num(sf.combined) + ',' +
                        csv_num(report.test_granules.sequence(i)[w]) + '\n';
        }
    }
    ctx.write_file("granule_forecasts.csv", gran_csv);

    std::string sigma_csv = "sigma,loocv_mse\n";
    for (const auto& [sigma, mse] : report.grnn_sigma.curve)
        sigma_csv += csv_num(sigma) + ',' + csv_num(mse) + '\n';
    ctx.write_file("grnn_sigma_curve.csv", sigma_csv);
    ctx.write_file("grnn_sigma_curve.svg",
                   grancast::render_plot({{"LOOCV MSE", [&] {
                                               std::vector<std::pair<double, double>> pts;
                                               for (const auto& [s, m] : report.grnn_sigma.curve)
                                                   pts.emplace_back(s, m);
                                               return pts;
                                           }()}},
                                         "GRNN smooth-factor search"));

    std::vector<grancast::Trace> traces{{"actual", indexed(report.test_values)}};
    for (const auto& row : report.models) traces.push_back({row.name, indexed(row.monthly)});
    ctx.write_file("comparison.svg", grancast::render_plot(traces, "held-out comparison"));

    for (const auto& row : report.models)
        ctx.note(row.name + ": mse=" + std::to_string(row.metrics.mse) +
                 " rmse=" + std::to_string(row.metrics.rmse));
}

void run_diagnose(RunContext& ctx) {
    const auto values = load_numeric_csv(ctx.cfg.input);
    const auto spec = ctx.cfg.adf_spec == "none"
                          ? grancast::AdfSpec::none
                          : (ctx.cfg.adf_spec == "constant_trend" ? grancast::AdfSpec::constant_trend
                                                                  : grancast::AdfSpec::constant);
    const int max_usable = static_cast<int>(values.size()) / 2 - 2;
    const int acf_lags = std::max(1, std::min(ctx.cfg.acf_lags, max_usable));
    const int lb_lags = std::max(1, std::min(ctx.cfg.lb_lags, max_usable));

    json doc;
    doc["n"] = values.size();
    doc["adf"] = grancast::adf_test(values, spec);
    const auto acf_vals = grancast::acf(values, static_cast<std::size_t>(acf_lags));
    const auto pacf_vals = grancast::pacf(values, static_cast<std::size_t>(acf_lags));
    doc["acf"] = acf_vals;
    doc["pacf"] = pacf_vals;
    doc["ljung_box"] = grancast::ljung_box(values, lb_lags, 0);
    ctx.write_file("diagnostics.json", doc.dump(2) + "\n");

    std::string acf_csv = "lag,acf\n";
    for (std::size_t k = 0; k < acf_vals.size(); ++k)
        acf_csv += std::to_string(k) + ',' + csv_num(acf_vals[k]) + '\n';
    ctx.write_file("acf.csv", acf_csv);

    std::string pacf_csv = "lag,pacf\n";
    for (std::size_t k = 0; k < pacf_vals.size(); ++k)
        pacf_csv += std::to_string(k + 1) + ',' + csv_num(pacf_vals[k]) + '\n';
    ctx.write_file("pacf.csv", pacf_csv);

    const auto& adf = doc["adf"];
    ctx.note("ADF statistic " + std::to_string(adf["statistic"].get<double>()) +
             (adf["reject_at"].is_null() ? std::string(" (unit root not rejected)")
                                         : " (stationary at " +
                                               std::to_string(adf["reject_at"].get<double>()) + ")"));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"granulated hybrid time-series forecasting toolkit"};
    app.require_subcommand(1);

    std::string config_path, input, out, model, train_end, features, monthly_mapping, fold_mode,
        orders, orders_raw, adf_spec;
    std::uint64_t seed = 0;
    std::size_t window_len = 0, lag = 0, horizon = 0, population = 0, generations = 0, folds = 0;
    int verbosity = -1;
    bool dump_config = false;

    app.add_option("--config", config_path, "flat JSON config file");
    app.add_option("--input", input, "input series CSV (YYYY-MM,value)");
    app.add_option("--out", out, "output directory");
    app.add_option("--model", model, "model.json from a previous fit (forecast)");
    app.add_option("--seed", seed, "master RNG seed");
    app.add_option("--window-len", window_len, "granulation window length in months");
    app.add_option("--lag", lag, "lag embedding depth, in windows");
    app.add_option("--horizon", horizon, "forecast horizon, in windows");
    app.add_option("--orders", orders, "residual ARIMA orders 'p,d,q[;p,d,q;p,d,q]'");
    app.add_option("--orders-raw", orders_raw, "raw-series ARIMA order 'p,d,q'");
    app.add_option("--train-end", train_end, "last training month YYYY-MM");
    app.add_option("--features", features, "regressor mode: lagged | cross");
    app.add_option("--monthly-mapping", monthly_mapping, "granule-to-month rule: mean | interpolate");
    app.add_option("--fold-mode", fold_mode, "CV fold assignment: random | blocked");
    app.add_option("--population", population, "GA population size");
    app.add_option("--generations", generations, "GA generations");
    app.add_option("--folds", folds, "cross-validation folds");
    app.add_option("--adf-spec", adf_spec, "ADF deterministic terms: none|constant|constant_trend");
    app.add_option("--verbosity", verbosity, "0 = quiet, 1 = progress");
    app.add_flag("--dump-config", dump_config, "print the resolved config and exit");

    for (const char* name : {"granulate", "tune", "fit", "forecast", "compare", "diagnose"})
        app.add_subcommand(name);

    CLI11_PARSE(app, argc, argv);
    const std::string subcommand = app.get_subcommands().front()->get_name();

    json overrides = json::object();
    if (app.count("--input")) overrides["input"] = input;
    if (app.count("--out")) overrides["out"] = out;
    if (app.count("--model")) overrides["model"] = model;
    if (app.count("--seed")) overrides["seed"] = seed;
    if (app.count("--window-len")) overrides["window_len"] = window_len;
    if (app.count("--lag")) overrides["lag"] = lag;
    if (app.count("--horizon")) overrides["horizon"] = horizon;
    if (app.count("--orders")) overrides["orders"] = orders;
    if (app.count("--orders-raw")) overrides["orders_raw"] = orders_raw;
    if (app.count("--train-end")) overrides["train_end"] = train_end;
    if (app.count("--features")) overrides["features"] = features;
    if (app.count("--monthly-mapping")) overrides["monthly_mapping"] = monthly_mapping;
    if (app.count("--fold-mode")) overrides["fold_mode"] = fold_mode;
    if (app.count("--population")) overrides["population"] = population;
    if (app.count("--generations")) overrides["generations"] = generations;
    if (app.count("--folds")) overrides["folds"] = folds;
    if (app.count("--adf-spec")) overrides["adf_spec"] = adf_spec;
    if (app.count("--verbosity")) overrides["verbosity"] = verbosity;

    json file_doc;
    RunContext ctx;
    std::string error;
    try {
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw std::runtime_error("cannot open config '" + config_path + "'");
            file_doc = json::parse(f);
        }
        const bool needs_input = !dump_config && subcommand != "forecast";
        ctx.cfg = grancast::parse_config(file_doc, overrides, needs_input);
        ctx.verbosity = ctx.cfg.verbosity;

        if (dump_config) {
            std::cout << grancast::dump_config(ctx.cfg);
            return 0;
        }

        ctx.out_dir = ctx.cfg.out;
        fs::create_directories(ctx.out_dir);

        if (subcommand == "granulate")
            run_granulate(ctx);
        else if (subcommand == "tune")
            run_tune(ctx);
        else if (subcommand == "fit")
            run_fit(ctx);
        else if (subcommand == "forecast")
            run_forecast(ctx);
        else if (subcommand == "compare")
            run_compare(ctx);
        else
            run_diagnose(ctx);
    } catch (const std::exception& e) {
        error = e.what();
    }

    if (ctx.out_dir.empty()) ctx.out_dir = app.count("--out") ? out : ctx.cfg.out;
    if (!ctx.out_dir.empty()) {
        json manifest{{"subcommand", subcommand},
                      {"config", grancast::config_to_json(ctx.cfg)},
                      {"seed", ctx.cfg.seed},
                      {"warnings", ctx.warnings},
                      {"outputs", ctx.outputs},
                      {"status", error.empty() ? "ok" : "error"}};
        manifest["error"] = error.empty() ? json(nullptr) : json(error);
        std::error_code ec;
        fs::create_directories(ctx.out_dir, ec);
        std::ofstream f(ctx.out_dir / "run.json", std::ios::binary);
        if (f) f << manifest.dump(2) << '\n';
    }

    if (!error.empty()) {
        std::cerr << "error: " << error << '\n';
        return 1;
    }
    for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << '\n';
    return 0;
}
