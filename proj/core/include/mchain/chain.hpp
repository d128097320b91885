#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mchain/errors.hpp"
#include "mchain/matrix.hpp"
#include "mchain/rational.hpp"

namespace mchain {

template <class T>
using Distribution = std::vector<T>;

namespace detail {

// Strong connectivity of the directed graph of positive entries
// (Kosaraju: forward DFS order, then DFS on the transpose).
template <class T>
bool strongly_connected(const Matrix<T>& p) {
    const std::size_t n = p.rows();
    if (n == 0) return false;
    auto reaches_all = [&](bool transpose) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w = 0; w < n; ++w) {
                const T& entry = transpose ? p(w, v) : p(v, w);
                if (!seen[w] && entry > num_traits<T>::zero()) {
                    seen[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
            }
        }
        return count == n;
    };
    return reaches_all(false) && reaches_all(true);
}

}  // namespace detail

// An irreducible finite Markov chain.  Immutable after construction; the
// constructor checks nonnegativity, row sums and strong connectivity.
template <class T>
class MarkovChain {
  public:
    explicit MarkovChain(Matrix<T> rows) : p_(std::move(rows)) {
        const std::size_t n = p_.rows();
        if (n == 0 || p_.cols() != n) throw InvalidParams("transition matrix must be square and nonempty");
        for (std::size_t i = 0; i < n; ++i) {
            T sum = num_traits<T>::zero();
            for (std::size_t j = 0; j < n; ++j) {
                if (p_(i, j) < num_traits<T>::zero()) throw InvalidParams("negative transition probability");
                sum += p_(i, j);
            }
            if constexpr (num_traits<T>::exact) {
                if (sum != num_traits<T>::one()) throw InvalidParams("row " + std::to_string(i) + " does not sum to 1");
            } else {
                if (num_traits<T>::abs(sum - num_traits<T>::one()) > 1e-12)
                    throw InvalidParams("row " + std::to_string(i) + " does not sum to 1 within 1e-12");
            }
        }
        if (!detail::strongly_connected(p_)) throw InvalidParams("chain is not irreducible");
    }

    std::size_t n() const { return p_.rows(); }
    const Matrix<T>& transition() const { return p_; }
    const T& prob(std::size_t from, std::size_t to) const { return p_(from, to); }

  private:
    Matrix<T> p_;
};

// pi P = pi, sum(pi) = 1, solved as a linear system with the first
// balance equation replaced by the normalization row.
template <class T>
Distribution<T> stationary(const MarkovChain<T>& chain) {
    const std::size_t n = chain.n();
    Matrix<T> a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = chain.prob(j, i);
        a(i, i) -= num_traits<T>::one();
    }
    for (std::size_t j = 0; j < n; ++j) a(0, j) = num_traits<T>::one();
    std::vector<T> rhs(n, num_traits<T>::zero());
    rhs[0] = num_traits<T>::one();
    return solve_linear(a, rhs);
}

template <class T>
T tv_distance(const Distribution<T>& mu, const Distribution<T>& nu) {
    if (mu.size() != nu.size()) throw LengthMismatch("tv_distance length mismatch");
    T acc = num_traits<T>::zero();
    for (std::size_t i = 0; i < mu.size(); ++i) acc += num_traits<T>::abs(mu[i] - nu[i]);
    return acc / 2;
}

// Maintains P^t incrementally so a d(t) scan is one matrix product per step.
template <class T>
class MixingScan {
  public:
    explicit MixingScan(const MarkovChain<T>& chain)
        : chain_(&chain), power_(Matrix<T>::identity(chain.n())), pi_(stationary(chain)), t_(0) {}

    long t() const { return t_; }
    const Matrix<T>& power() const { return power_; }

    void step() {
        power_ = power_ * chain_->transition();
        ++t_;
    }

    // d(t) = max_x ||P^t(x,.) - pi||
    T worst_tv() const {
        const std::size_t n = chain_->n();
        T best = num_traits<T>::zero();
        for (std::size_t x = 0; x < n; ++x) {
            T acc = num_traits<T>::zero();
            for (std::size_t y = 0; y < n; ++y) acc += num_traits<T>::abs(power_(x, y) - pi_[y]);
            acc /= 2;
            if (acc > best) best = acc;
        }
        return best;
    }

  private:
    const MarkovChain<T>* chain_;
    Matrix<T> power_;
    Distribution<T> pi_;
    long t_;
};

template <class T>
struct MixingProfile {
    std::vector<T> values;                // d(0) .. d(T)
    std::map<std::string, long> epsilon_thresholds;
};

template <class T>
T worst_case_tv(const MarkovChain<T>& chain, long t) {
    MixingScan<T> scan(chain);
    for (long s = 0; s < t; ++s) scan.step();
    return scan.worst_tv();
}

// min{t >= 0 : d(t) <= eps}.  Asserts TV contraction as it scans;
// throws CapExceeded when d(cap) is still above eps.
template <class T>
long t_mix(const MarkovChain<T>& chain, const T& epsilon, long cap) {
    if (!(epsilon > num_traits<T>::zero() && epsilon < num_traits<T>::one()))
        throw InvalidParams("epsilon must lie in (0,1)");
    if (cap < 1) throw InvalidParams("cap must be >= 1");
    MixingScan<T> scan(chain);
    T prev = scan.worst_tv();
    if (prev <= epsilon) return 0;
    for (long t = 1; t <= cap; ++t) {
        scan.step();
        T cur = scan.worst_tv();
        if constexpr (!num_traits<T>::exact) {
            if (cur > prev + 1e-12) throw MonotonicityViolation("d(t) increased at t=" + std::to_string(t));
        } else {
            if (cur > prev) throw MonotonicityViolation("d(t) increased at t=" + std::to_string(t));
        }
        if (cur <= epsilon) return t;
        prev = cur;
    }
    throw CapExceeded("d(t) stayed above epsilon up to cap=" + std::to_string(cap));
}

template <class T>
MixingProfile<T> mixing_profile(const MarkovChain<T>& chain, long horizon) {
    MixingProfile<T> profile;
    MixingScan<T> scan(chain);
    profile.values.push_back(scan.worst_tv());
    for (long t = 1; t <= horizon; ++t) {
        scan.step();
        profile.values.push_back(scan.worst_tv());
    }
    return profile;
}

// (P + I) / 2
template <class T>
MarkovChain<T> lazify(const MarkovChain<T>& chain) {
    const std::size_t n = chain.n();
    Matrix<T> q(n, n);
    const T half = num_traits<T>::ratio(1, 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) q(i, j) = chain.prob(i, j) * half;
        q(i, i) += half;
    }
    return MarkovChain<T>(q);
}

// Smallest k >= 0 with 2^k >= 1/alpha, i.e. ceil(log2(1/alpha)).
template <class T>
long ceil_log2_inverse(const T& alpha) {
    if (!(alpha > num_traits<T>::zero() && alpha <= num_traits<T>::one()))
        throw InvalidParams("alpha must lie in (0,1]");
    long k = 0;
    T pow = num_traits<T>::one();
    while (alpha * pow < num_traits<T>::one()) {
        pow *= 2;
        ++k;
        if (k > 128) throw InvalidParams("alpha too small");
    }
    return k;
}

}  // namespace mchain
