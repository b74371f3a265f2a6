#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "grancast/timeseries.hpp"
#include "support/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWorkRoot = fs::temp_directory_path() / "grancast_cli_tests";

struct CliRun {
    int exit_code = 0;
    fs::path out;
};

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

CliRun run_cli(const std::string& name, const std::string& args) {
    const fs::path out = kWorkRoot / name;
    fs::remove_all(out);
    fs::create_directories(out);
    const std::string cmd = std::string(GRANCAST_CLI_BIN) + " " + args + " --out " +
                            quoted(out) + " --verbosity 0 > " + quoted(out / "stdout.txt") +
                            " 2> " + quoted(out / "stderr.txt");
    const int status = std::system(cmd.c_str());
    CliRun run;
    run.exit_code = status == -1 ? -1 : WEXITSTATUS(status);
    run.out = out;
    return run;
}

fs::path write_series(const std::string& name, std::size_t months = 72) {
    fs::create_directories(kWorkRoot);
    const fs::path path = kWorkRoot / name;
    const auto series = sim::benchmark_series();
    std::vector<grancast::TimePoint> pts(series.points().begin(),
                                         series.points().begin() + months);
    grancast::write_csv(grancast::TimeSeries::from_points(pts), path.string());
    return path;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("granulate writes granules.csv and a manifest", "[cli]") {
    const auto input = write_series("series_a.csv", 66);
    const auto run = run_cli("granulate", "granulate --input " + quoted(input));
    REQUIRE(run.exit_code == 0);

    const auto manifest = json::parse(slurp(run.out / "run.json"));
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["error"].is_null());
    CHECK(manifest["subcommand"] == "granulate");

    const std::string csv = slurp(run.out / "granules.csv");
    CHECK(csv.rfind("window_index,a,m,b\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 23);  // header + 22 windows
}

TEST_CASE("granulate reports a dropped remainder as a warning", "[cli]") {
    const auto input = write_series("series_b.csv", 67);
    const auto run = run_cli("granulate_rem", "granulate --input " + quoted(input));
    REQUIRE(run.exit_code == 0);
    const auto manifest = json::parse(slurp(run.out / "run.json"));
    REQUIRE(manifest["warnings"].size() == 1);
    CHECK(manifest["status"] == "ok");
}

TEST_CASE("errors produce a manifest and a non-zero exit", "[cli]") {
    const auto run = run_cli("missing_input", "granulate --input /nonexistent.csv");
    CHECK(run.exit_code == 1);
    const auto manifest = json::parse(slurp(run.out / "run.json"));
    CHECK(manifest["status"] == "error");
    CHECK(!manifest["error"].is_null());
}

TEST_CASE("dump-config round-trips byte-identically through a file", "[cli]") {
    const auto input = write_series("series_c.csv", 66);
    const auto first = run_cli("dump1", "granulate --input " + quoted(input) +
                                            " --window-len 4 --seed 99 --dump-config");
    REQUIRE(first.exit_code == 0);
    const std::string dumped = slurp(first.out / "stdout.txt");
    REQUIRE(!dumped.empty());

    const fs::path cfg_file = kWorkRoot / "dumped_config.json";
    std::ofstream(cfg_file, std::ios::binary) << dumped;
    const auto second = run_cli("dump2", "granulate --config " + quoted(cfg_file) + " --dump-config");
    REQUIRE(second.exit_code == 0);
    CHECK(slurp(second.out / "stdout.txt") == dumped);
}

TEST_CASE("diagnose emits diagnostics and plot data", "[cli]") {
    const auto input = write_series("series_d.csv", 120);
    const auto run = run_cli("diagnose", "diagnose --input " + quoted(input) + " --adf-spec constant");
    REQUIRE(run.exit_code == 0);
    const auto doc = json::parse(slurp(run.out / "diagnostics.json"));
    CHECK(doc.contains("adf"));
    CHECK(doc.contains("acf"));
    CHECK(doc.contains("pacf"));
    CHECK(doc.contains("ljung_box"));
    CHECK(doc["adf"]["spec"] == "constant");
    CHECK(doc["acf"][0] == 1.0);

    const std::string acf_csv = slurp(run.out / "acf.csv");
    CHECK(acf_csv.rfind("lag,acf\n", 0) == 0);
    const std::string pacf_csv = slurp(run.out / "pacf.csv");
    CHECK(pacf_csv.rfind("lag,pacf\n", 0) == 0);
}

TEST_CASE("fit then forecast round-trips the model document", "[cli]") {
    const auto input = write_series("series_e.csv", 90);
    const std::string speedup =
        " --population 6 --generations 6 --folds 3";
    const auto fit = run_cli("fit", "fit --input " + quoted(input) + speedup);
    REQUIRE(fit.exit_code == 0);
    REQUIRE(fs::exists(fit.out / "model.json"));
    REQUIRE(fs::exists(fit.out / "residuals.csv"));
    REQUIRE(fs::exists(fit.out / "fit_min.svg"));

    const auto fc = run_cli("forecast", "forecast --model " + quoted(fit.out / "model.json") +
                                            " --horizon 2");
    REQUIRE(fc.exit_code == 0);
    const auto doc = json::parse(slurp(fc.out / "forecast.json"));
    REQUIRE(doc["windows"].size() == 2);
    for (const auto& w : doc["windows"]) {
        const double combined = w["mean"]["combined"].get<double>();
        const double svr = w["mean"]["svr"].get<double>();
        const double corr = w["mean"]["resid_correction"].get<double>();
        CHECK(combined == svr + corr);
    }
    CHECK(doc["monthly_combined"].size() == 6);
}

TEST_CASE("unknown config keys fail the run", "[cli]") {
    const auto input = write_series("series_f.csv", 66);
    const fs::path cfg_file = kWorkRoot / "bad_config.json";
    std::ofstream(cfg_file) << R"({"win_len": 4})";
    const auto run = run_cli("badcfg", "granulate --input " + quoted(input) + " --config " +
                                           quoted(cfg_file));
    CHECK(run.exit_code == 1);
    const auto manifest = json::parse(slurp(run.out / "run.json"));
    const std::string err = manifest["error"].get<std::string>();
    CHECK(err.find("win_len") != std::string::npos);
}
