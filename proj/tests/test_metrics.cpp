#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "grancast/metrics.hpp"

using namespace grancast;
using Catch::Approx;

namespace {
const std::vector<double> kActual{101.2, 103.3, 105.5};
}

TEST_CASE("perfect predictions score zero everywhere", "[metrics]") {
    const auto m = evaluate(kActual, kActual);
    CHECK(m.mse == 0.0);
    CHECK(m.rmse == 0.0);
    CHECK(m.mae == 0.0);
    CHECK(m.mape_percent == 0.0);
}

TEST_CASE("held-out index levels reproduce the reference table rows", "[metrics]") {
    // Four model prediction vectors against the same three observations; the
    // expected bundles are fixed at four printed decimals.
    const auto hybrid = evaluate(std::vector<double>{101.2103, 102.94, 104.9834}, kActual);
    CHECK(hybrid.mse == Approx(0.1322).margin(1e-4));
    CHECK(hybrid.rmse == Approx(0.3636).margin(1e-4));
    CHECK(hybrid.mae == Approx(0.2956).margin(1e-4));
    CHECK(hybrid.mape_percent == Approx(0.2828).margin(1e-4));

    const auto arima = evaluate(std::vector<double>{100.971, 104.954, 106.864}, kActual);
    CHECK(arima.mse == Approx(1.5496).margin(1e-4));
    CHECK(arima.rmse == Approx(1.2448).margin(1e-4));
    CHECK(arima.mae == Approx(1.0823).margin(1e-4));
    CHECK(arima.mape_percent == Approx(1.0401).margin(1e-4));

    const auto grnn = evaluate(std::vector<double>{99.992, 101.517, 103.212}, kActual);
    CHECK(grnn.mse == Approx(3.2911).margin(1e-4));
    CHECK(grnn.rmse == Approx(1.8141).margin(1e-4));
    CHECK(grnn.mae == Approx(1.7597).margin(1e-4));
    CHECK(grnn.mape_percent == Approx(1.6962).margin(1e-4));

    const auto gasvr = evaluate(std::vector<double>{101.2832, 99.23, 100.3076}, kActual);
    CHECK(gasvr.mse == Approx(14.5109).margin(1e-4));
    CHECK(gasvr.rmse == Approx(3.8093).margin(1e-4));
    CHECK(gasvr.mae == Approx(3.1152).margin(1e-4));
    CHECK(gasvr.mape_percent == Approx(2.9813).margin(1e-4));
}

TEST_CASE("single-pair arithmetic", "[metrics]") {
    const auto m = evaluate(std::vector<double>{3.0}, std::vector<double>{1.0});
    CHECK(m.mse == 4.0);
    CHECK(m.rmse == 2.0);
    CHECK(m.mae == 2.0);
    CHECK(m.mape_percent == 200.0);
}

TEST_CASE("errors on bad input", "[metrics]") {
    CHECK_THROWS(evaluate(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0}));
    CHECK_THROWS(evaluate(std::vector<double>{}, std::vector<double>{}));
    CHECK_THROWS(evaluate(std::vector<double>{1.0}, std::vector<double>{0.0}));
}

TEST_CASE("rmse is the square root of mse and bounds mae", "[metrics]") {
    std::mt19937_64 gen(5150);
    const auto u = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 1 + gen() % 12;
        std::vector<double> p(n), o(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = u() * 10.0 - 5.0;
            o[i] = 1.0 + u() * 10.0;
        }
        const auto m = evaluate(p, o);
        CHECK(m.rmse * m.rmse == Approx(m.mse).margin(1e-10));
        CHECK(m.mae <= m.rmse + 1e-12);
    }
}

TEST_CASE("metrics scale equivariantly", "[metrics]") {
    std::mt19937_64 gen(6);
    const auto u = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + gen() % 8;
        std::vector<double> p(n), o(n), pc(n), oc(n);
        const double c = 0.5 + u() * 4.0;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = u() * 10.0 - 5.0;
            o[i] = 1.0 + u() * 10.0;
            pc[i] = c * p[i];
            oc[i] = c * o[i];
        }
        const auto m = evaluate(p, o);
        const auto mc = evaluate(pc, oc);
        CHECK(mc.mse == Approx(c * c * m.mse).epsilon(1e-10));
        CHECK(mc.rmse == Approx(c * m.rmse).epsilon(1e-10));
        CHECK(mc.mae == Approx(c * m.mae).epsilon(1e-10));
        CHECK(mc.mape_percent == Approx(m.mape_percent).epsilon(1e-10));
    }
}
