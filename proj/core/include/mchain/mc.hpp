#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mchain/generators.hpp"
#include "mchain/hitting.hpp"

namespace mchain {

// Counter-based substreams: every (seed, index) pair yields an independent
// generator, so parallel and serial evaluation orders agree.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long runs = 0;
};

// One sampled transition from `state` by inverse transform on the row.
inline std::size_t sample_step(const MarkovChain<double>& chain, std::size_t state, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    double acc = 0.0;
    const std::size_t n = chain.n();
    for (std::size_t y = 0; y + 1 < n; ++y) {
        acc += chain.prob(state, y);
        if (u < acc) return y;
    }
    return n - 1;
}

// Seeded Monte Carlo estimate of E_start[tau] for a moving target.
// Exists as a cross-check oracle for the exact recursion.
inline McEstimate mc_moving_hitting(const MarkovChain<double>& chain, std::size_t start,
                                    const SetSequence& seq, long runs, std::uint64_t seed,
                                    long step_cap = 1'000'000) {
    double sum = 0.0, sumsq = 0.0;
    for (long r = 0; r < runs; ++r) {
        std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(r));
        std::size_t x = start;
        long t = 0;
        while (!seq.at(static_cast<std::size_t>(t)).contains(x)) {
            x = sample_step(chain, x, rng);
            ++t;
            if (t > step_cap) throw BudgetExceeded("moving-target simulation exceeded step cap");
        }
        double tau = static_cast<double>(t);
        sum += tau;
        sumsq += tau * tau;
    }
    McEstimate est;
    est.runs = runs;
    est.mean = sum / static_cast<double>(runs);
    double var = (sumsq - sum * est.mean) / std::max(1.0, static_cast<double>(runs - 1));
    est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(runs));
    return est;
}

}  // namespace mchain
