#ifndef GRANCAST_DETAIL_RNG_HPP
#define GRANCAST_DETAIL_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace grancast::detail {

/// SplitMix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(base, a), b);
}

/// Uniform double in [0, 1). Hand-rolled so results do not depend on the
/// standard library's distribution implementation.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& gen, double low, double high) {
    return low + uniform01(gen) * (high - low);
}

/// Uniform integer in [0, n). Modulo bias is irrelevant at these sizes.
inline std::size_t uniform_below(std::mt19937_64& gen, std::size_t n) {
    return static_cast<std::size_t>(gen() % n);
}

/// Fisher-Yates shuffle with an explicit draw sequence; reproducible across
/// standard library implementations (std::shuffle is not).
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = uniform_below(gen, i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace grancast::detail

#endif
