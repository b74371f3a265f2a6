#ifndef GRANCAST_TESTS_SIM_HPP
#define GRANCAST_TESTS_SIM_HPP

// Seeded process simulators for the statistical tests. Normal draws use an
// explicit Box-Muller transform so simulated paths do not depend on the
// standard library's distribution internals.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "grancast/timeseries.hpp"

namespace sim {

class Normal {
public:
    explicit Normal(std::uint64_t seed) : gen_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
    Normal normal(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = sigma * normal();
    return x;
}

inline std::vector<double> ar1(double phi, std::size_t n, std::uint64_t seed, double sigma = 1.0,
                               std::size_t burn = 100) {
    Normal normal(seed);
    std::vector<double> x;
    x.reserve(n);
    double prev = 0.0;
    for (std::size_t t = 0; t < n + burn; ++t) {
        prev = phi * prev + sigma * normal();
        if (t >= burn) x.push_back(prev);
    }
    return x;
}

inline std::vector<double> ar2(double phi1, double phi2, std::size_t n, std::uint64_t seed,
                               double sigma = 1.0, std::size_t burn = 200) {
    Normal normal(seed);
    std::vector<double> x;
    x.reserve(n);
    double prev1 = 0.0, prev2 = 0.0;
    for (std::size_t t = 0; t < n + burn; ++t) {
        const double v = phi1 * prev1 + phi2 * prev2 + sigma * normal();
        prev2 = prev1;
        prev1 = v;
        if (t >= burn) x.push_back(v);
    }
    return x;
}

inline std::vector<double> ma1(double theta, std::size_t n, std::uint64_t seed, double sigma = 1.0) {
    Normal normal(seed);
    std::vector<double> x(n);
    double prev_u = sigma * normal();
    for (std::size_t t = 0; t < n; ++t) {
        const double u = sigma * normal();
        x[t] = u + theta * prev_u;
        prev_u = u;
    }
    return x;
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
    Normal normal(seed);
    std::vector<double> x(n);
    double level = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        level += sigma * normal();
        x[t] = level;
    }
    return x;
}

/// The shipped benchmark: 192 months from 2001-01, an index-like level around
/// 100 with a mild trend, two seasonal harmonics, and AR(1) noise.
inline grancast::TimeSeries benchmark_series() {
    constexpr std::size_t kMonths = 192;
    Normal normal(0x67C0FFEEULL);
    std::vector<grancast::TimePoint> pts;
    pts.reserve(kMonths);
    grancast::YearMonth ym{2001, 1};
    double ar = 0.0;
    for (std::size_t t = 0; t < kMonths; ++t) {
        ar = 0.65 * ar + 0.35 * normal();
        const double tt = static_cast<double>(t);
        const double value = 100.0 + 0.012 * tt + 2.4 * std::sin(2.0 * 3.14159265358979323846 * tt / 12.0 - 0.4) +
                             1.1 * std::sin(2.0 * 3.14159265358979323846 * tt / 6.0 + 0.9) + ar;
        pts.push_back({ym, value});
        ym = ym.next();
    }
    return grancast::TimeSeries::from_points(std::move(pts));
}

}  // namespace sim

#endif
