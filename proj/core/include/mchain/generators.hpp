#pragma once

#include <cstdint>
#include <random>

#include "mchain/chain.hpp"

namespace mchain {

// Walk on the cycle Z_n stepping +1 with probability p and -1 otherwise.
template <class T>
MarkovChain<T> biased_cycle(std::size_t n, const T& p) {
    if (n < 3) throw InvalidParams("biased_cycle needs n >= 3");
    if (!(p > num_traits<T>::zero() && p < num_traits<T>::one()))
        throw InvalidParams("bias must lie in (0,1)");
    Matrix<T> m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, (i + 1) % n) = p;
        m(i, (i + n - 1) % n) = num_traits<T>::one() - p;
    }
    return MarkovChain<T>(m);
}

template <class T>
MarkovChain<T> simple_cycle(std::size_t n) {
    return biased_cycle<T>(n, num_traits<T>::ratio(1, 2));
}

template <class T>
MarkovChain<T> lazy_cycle(std::size_t n) {
    return lazify(simple_cycle<T>(n));
}

// Random chain with strictly positive entries (hence irreducible).
// Entries are small rationals so exact-mode tests stay cheap.
inline MarkovChain<Rat> random_chain(std::size_t n, std::mt19937_64& rng) {
    if (n < 2) throw InvalidParams("random_chain needs n >= 2");
    std::uniform_int_distribution<int> weight(1, 9);
    Matrix<Rat> m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        long total = 0;
        std::vector<long> w(n);
        for (std::size_t j = 0; j < n; ++j) {
            w[j] = weight(rng);
            total += w[j];
        }
        for (std::size_t j = 0; j < n; ++j) m(i, j) = make_ratio(w[j], total);
    }
    return MarkovChain<Rat>(m);
}

template <class T>
MarkovChain<T> to_mode(const MarkovChain<Rat>& chain) {
    if constexpr (num_traits<T>::exact) {
        return chain;
    } else {
        const std::size_t n = chain.n();
        Matrix<double> m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = chain.prob(i, j).get_d();
        return MarkovChain<double>(m);
    }
}

inline MarkovChain<double> to_float(const MarkovChain<Rat>& chain) { return to_mode<double>(chain); }

}  // namespace mchain
