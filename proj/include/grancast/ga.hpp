#ifndef GRANCAST_GA_HPP
#define GRANCAST_GA_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "grancast/detail/rng.hpp"
#include "grancast/svr.hpp"

namespace grancast {

enum class ParamScale { linear, log };

struct ParamRange {
    double low = 0.0;
    double high = 1.0;
    ParamScale scale = ParamScale::linear;

    void validate() const {
        if (!(low < high)) throw std::invalid_argument("parameter range requires low < high");
        if (scale == ParamScale::log && !(low > 0.0))
            throw std::invalid_argument("log-scaled range requires positive bounds");
    }
};

enum class FoldMode { random, blocked };

struct GaConfig {
    std::size_t population = 20;
    std::size_t generations = 200;
    double crossover_prob = 0.8;
    double mutation_prob = 0.05;
    std::size_t bits_per_param = 16;
    ParamRange c_range{0.01, 100.0, ParamScale::log};
    ParamRange gamma_range{0.01, 100.0, ParamScale::log};
    ParamRange eps_range{0.001, 1.0, ParamScale::linear};
    std::size_t folds = 5;
    FoldMode fold_mode = FoldMode::random;
    std::uint64_t seed = 424242;
    double svr_tol = 1e-3;
    std::size_t svr_max_iter = 0;

    void validate() const {
        if (population < 2) throw std::invalid_argument("population must be at least 2");
        if (generations < 1) throw std::invalid_argument("generations must be at least 1");
        if (crossover_prob < 0.0 || crossover_prob > 1.0)
            throw std::invalid_argument("crossover probability outside [0,1]");
        if (mutation_prob < 0.0 || mutation_prob > 1.0)
            throw std::invalid_argument("mutation probability outside [0,1]");
        if (bits_per_param < 1 || bits_per_param > 32)
            throw std::invalid_argument("bits_per_param outside [1,32]");
        if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
        c_range.validate();
        gamma_range.validate();
        eps_range.validate();
    }

    std::size_t genome_length() const { return 3 * bits_per_param; }
};

/// Fixed-length binary chromosome; parameter j occupies bits
/// [j*bits_per_param, (j+1)*bits_per_param), most significant bit first.
struct Genome {
    std::vector<std::uint8_t> bits;
};

inline std::uint64_t genome_int(const Genome& g, std::size_t param, std::size_t bits_per_param) {
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < bits_per_param; ++b)
        v = (v << 1) | g.bits[param * bits_per_param + b];
    return v;
}

inline double decode_range(std::uint64_t value, std::size_t bits, const ParamRange& range) {
    const double denom = static_cast<double>((std::uint64_t{1} << bits) - 1);
    const double frac = denom == 0.0 ? 0.0 : static_cast<double>(value) / denom;
    if (range.scale == ParamScale::log)
        return std::exp(std::log(range.low) + frac * (std::log(range.high) - std::log(range.low)));
    return range.low + frac * (range.high - range.low);
}

inline SvrParams decode(const Genome& g, const GaConfig& config) {
    if (g.bits.size() != config.genome_length())
        throw std::invalid_argument("genome length does not match configuration");
    SvrParams p;
    p.c_penalty = decode_range(genome_int(g, 0, config.bits_per_param), config.bits_per_param, config.c_range);
    p.gamma = decode_range(genome_int(g, 1, config.bits_per_param), config.bits_per_param, config.gamma_range);
    p.epsilon = decode_range(genome_int(g, 2, config.bits_per_param), config.bits_per_param, config.eps_range);
    return p;
}

/// Fold assignment: a seeded Fisher-Yates shuffle of the row indices (or the
/// identity order for blocked folds) cut into k nearly equal contiguous
/// slices; fold f covers positions [f*n/k, (f+1)*n/k).
inline std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k,
                                                        std::uint64_t seed, FoldMode mode) {
    if (n < k) throw std::invalid_argument("fewer samples than folds");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (mode == FoldMode::random) {
        std::mt19937_64 gen(seed);
        detail::shuffle(idx, gen);
    }
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t begin = f * n / k;
        const std::size_t end = (f + 1) * n / k;
        folds[f].assign(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                        idx.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return folds;
}

/// k-fold cross-validated MSE: the mean over folds of the out-of-fold MSE.
/// Errors are measured in the units of `data`; callers that pre-scale their
/// data obtain scaled-unit fitness.
inline double cv_fitness(const SupervisedSet& data, const SvrParams& params, std::size_t k,
                         std::uint64_t seed, FoldMode mode = FoldMode::random,
                         double svr_tol = 1e-3, std::size_t svr_max_iter = 0) {
    const auto folds = make_folds(data.size(), k, seed, mode);
    double total = 0.0;
    for (const auto& fold : folds) {
        std::vector<std::uint8_t> held(data.size(), 0);
        for (std::size_t i : fold) held[i] = 1;
        SupervisedSet train;
        train.lag = data.lag;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (held[i]) continue;
            train.inputs.push_back(data.inputs[i]);
            train.targets.push_back(data.targets[i]);
        }
        const SvrModel model = train_svr(train, params, svr_tol, svr_max_iter);
        double fold_sse = 0.0;
        for (std::size_t i : fold) {
            const double err = predict_scaled(model, data.inputs[i]) - data.targets[i];
            fold_sse += err * err;
        }
        total += fold_sse / static_cast<double>(fold.size());
    }
    return total / static_cast<double>(folds.size());
}

struct GaResult {
    SvrParams best_params;
    double best_fitness = 0.0;
    std::vector<double> history;  // best-so-far fitness per generation
    Genome best_genome;
};

/// Fitness callback: (decoded params, generation, individual index) -> value
/// to minimize. Any evaluation randomness must derive from those indices so
/// serial and parallel schedules agree.
using FitnessFn = std::function<double(const SvrParams&, std::size_t, std::size_t)>;

/// Generational GA: roulette selection on 1/(1+fitness), single-point
/// crossover, per-bit mutation, elitism of one. The elite keeps its evaluated
/// fitness, so the history never increases.
inline GaResult evolve_with(const GaConfig& config, const FitnessFn& fitness) {
    config.validate();
    const std::size_t len = config.genome_length();
    const std::size_t pop_size = config.population;

    std::mt19937_64 gen(detail::mix_seed(config.seed, 0x6741));
    std::vector<Genome> population(pop_size);
    for (auto& g : population) {
        g.bits.resize(len);
        for (auto& bit : g.bits) bit = static_cast<std::uint8_t>(gen() & 1u);
    }

    std::vector<double> fit(pop_size);
    GaResult result;
    result.best_fitness = std::numeric_limits<double>::infinity();

    bool have_elite = false;
    double elite_fitness = 0.0;

    for (std::size_t g = 0; g < config.generations; ++g) {
        for (std::size_t i = 0; i < pop_size; ++i) {
            if (i == 0 && have_elite) {
                fit[i] = elite_fitness;  // carried over, not re-evaluated
                continue;
            }
            fit[i] = fitness(decode(population[i], config), g, i);
        }

        std::size_t gen_best = 0;
        for (std::size_t i = 1; i < pop_size; ++i)
            if (fit[i] < fit[gen_best]) gen_best = i;
        if (fit[gen_best] < result.best_fitness) {
            result.best_fitness = fit[gen_best];
            result.best_genome = population[gen_best];
        }
        result.history.push_back(result.best_fitness);

        if (g + 1 == config.generations) break;

        // Roulette weights favor small fitness.
        std::vector<double> cum(pop_size);
        double acc = 0.0;
        for (std::size_t i = 0; i < pop_size; ++i) {
            acc += 1.0 / (1.0 + fit[i]);
            cum[i] = acc;
        }
        const auto pick = [&]() -> const Genome& {
            const double u = detail::uniform01(gen) * acc;
            std::size_t lo = 0;
            while (lo + 1 < pop_size && cum[lo] <= u) ++lo;
            return population[lo];
        };

        std::vector<Genome> next;
        next.reserve(pop_size);
        next.push_back(result.best_genome);  // elitism
        while (next.size() < pop_size) {
            Genome child_a = pick();
            Genome child_b = pick();
            if (detail::uniform01(gen) < config.crossover_prob && len >= 2) {
                const std::size_t cut = 1 + detail::uniform_below(gen, len - 1);
                for (std::size_t b = cut; b < len; ++b)
                    std::swap(child_a.bits[b], child_b.bits[b]);
            }
            for (auto& bit : child_a.bits)
                if (detail::uniform01(gen) < config.mutation_prob) bit ^= 1u;
            for (auto& bit : child_b.bits)
                if (detail::uniform01(gen) < config.mutation_prob) bit ^= 1u;
            next.push_back(std::move(child_a));
            if (next.size() < pop_size) next.push_back(std::move(child_b));
        }
        population = std::move(next);
        have_elite = true;
        elite_fitness = result.best_fitness;
    }

    result.best_params = decode(result.best_genome, config);
    return result;
}

/// GA search of (C, gamma, epsilon) by cross-validated MSE. Each evaluation's
/// fold shuffle is seeded from (seed, generation, index).
inline GaResult evolve(const SupervisedSet& data, const GaConfig& config) {
    const FitnessFn fitness = [&](const SvrParams& params, std::size_t g, std::size_t i) {
        const std::uint64_t s = detail::mix_seed(config.seed, g, i);
        return cv_fitness(data, params, config.folds, s, config.fold_mode, config.svr_tol,
                          config.svr_max_iter);
    };
    return evolve_with(config, fitness);
}

}  // namespace grancast

#endif
