#ifndef GRANCAST_GRANULATION_HPP
#define GRANCAST_GRANULATION_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "grancast/timeseries.hpp"

namespace grancast {

/// Triangular fuzzy particle summarizing one window: left support `a`
/// (window minimum), core `m` (window mean), right support `b` (window
/// maximum).
struct FuzzyGranule {
    double a = 0.0;
    double m = 0.0;
    double b = 0.0;
    std::size_t window_index = 0;
};

/// Triangular membership degree of `x` in the granule. Degenerate edges
/// (m == a or b == m) evaluate to 1 exactly at the coincident point and 0
/// elsewhere on that side.
inline double membership(const FuzzyGranule& g, double x) {
    if (x < g.a || x > g.b) return 0.0;
    if (x == g.m) return 1.0;
    if (x < g.m) return (x - g.a) / (g.m - g.a);
    return (g.b - x) / (g.b - g.m);
}

struct Partition {
    std::vector<std::vector<double>> windows;
    std::size_t dropped = 0;  // trailing values that did not fill a window
};

/// Non-overlapping consecutive windows of exactly `window_len` values,
/// anchored at the start; the remainder is dropped and reported.
inline Partition partition(std::span<const double> values, std::size_t window_len) {
    if (window_len < 1) throw std::invalid_argument("window length must be at least 1");
    if (values.size() < window_len)
        throw std::invalid_argument("series shorter than one granulation window");
    Partition out;
    const std::size_t count = values.size() / window_len;
    out.windows.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const auto begin = values.begin() + static_cast<std::ptrdiff_t>(w * window_len);
        out.windows.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(window_len));
    }
    out.dropped = values.size() - count * window_len;
    return out;
}

inline Partition partition(const TimeSeries& series, std::size_t window_len) {
    const auto v = series.values();
    return partition(std::span<const double>(v), window_len);
}

inline FuzzyGranule granulate_window(std::span<const double> window, std::size_t index = 0) {
    if (window.empty()) throw std::invalid_argument("cannot granulate an empty window");
    FuzzyGranule g;
    g.window_index = index;
    g.a = *std::min_element(window.begin(), window.end());
    g.b = *std::max_element(window.begin(), window.end());
    g.m = std::accumulate(window.begin(), window.end(), 0.0) / static_cast<double>(window.size());
    return g;
}

/// The three aligned Min/Mean/Max sequences, one entry per window.
struct GranuleSequences {
    std::vector<double> min_seq;
    std::vector<double> mean_seq;
    std::vector<double> max_seq;

    std::size_t size() const { return min_seq.size(); }

    FuzzyGranule granule(std::size_t w) const {
        return {min_seq[w], mean_seq[w], max_seq[w], w};
    }

    const std::vector<double>& sequence(std::size_t which) const {
        switch (which) {
            case 0: return min_seq;
            case 1: return mean_seq;
            default: return max_seq;
        }
    }
};

inline constexpr const char* kSequenceNames[3] = {"min", "mean", "max"};

inline GranuleSequences granulate_values(std::span<const double> values, std::size_t window_len) {
    const Partition part = partition(values, window_len);
    GranuleSequences seqs;
    seqs.min_seq.reserve(part.windows.size());
    seqs.mean_seq.reserve(part.windows.size());
    seqs.max_seq.reserve(part.windows.size());
    for (std::size_t w = 0; w < part.windows.size(); ++w) {
        const FuzzyGranule g = granulate_window(part.windows[w], w);
        seqs.min_seq.push_back(g.a);
        seqs.mean_seq.push_back(g.m);
        seqs.max_seq.push_back(g.b);
    }
    return seqs;
}

inline GranuleSequences granulate_series(const TimeSeries& series, std::size_t window_len) {
    const auto v = series.values();
    return granulate_values(std::span<const double>(v), window_len);
}

}  // namespace grancast

#endif
