#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mchain/hitting.hpp"

namespace mchain {

// (2 ceil(log2(1/alpha)) / alpha) * t_mix(1/4): the proven upper bound on
// the expected hitting time of any sequence whose sets all have stationary
// measure >= alpha.
template <class T>
T theorem1_upper_bound(const MarkovChain<T>& chain, const T& alpha, long mix_cap = 200000) {
    long tmix = t_mix(chain, num_traits<T>::ratio(1, 4), mix_cap);
    T bound = num_traits<T>::ratio(2 * ceil_log2_inverse(alpha), 1) / alpha;
    return bound * num_traits<T>::ratio(tmix, 1);
}

template <class T>
void check_tripwire(const T& achieved, const T& bound, const std::string& context) {
    if (achieved > bound + num_traits<T>::slack())
        throw TripwireViolation(context + ": moving-target expectation exceeds the mixing bound");
}

struct SlowWitness {
    std::size_t x;
    StateSet A;
};

// Looks for (x, A) with P^t(x, A) < pi(A) - (alpha + epsilon).  Tests the
// canonical TV-achieving set A_x = {y : P^t(x,y) < pi(y)} per start; that
// set maximizes the deficit for each x, so none-found means no pair exists.
template <class T>
std::optional<SlowWitness> find_slow_witness(const MarkovChain<T>& chain, const T& alpha,
                                             const T& epsilon, long t) {
    if (!(alpha + epsilon < num_traits<T>::ratio(1, 2)))
        throw InvalidParams("need alpha + epsilon < 1/2");
    const std::size_t n = chain.n();
    Distribution<T> pi = stationary(chain);
    MixingScan<T> scan(chain);
    for (long s = 0; s < t; ++s) scan.step();
    const Matrix<T>& pt = scan.power();
    for (std::size_t x = 0; x < n; ++x) {
        StateSet a(n);
        T p_in = num_traits<T>::zero(), pi_in = num_traits<T>::zero();
        for (std::size_t y = 0; y < n; ++y) {
            if (pt(x, y) < pi[y]) {
                a.add(y);
                p_in += pt(x, y);
                pi_in += pi[y];
            }
        }
        if (!a.empty() && p_in < pi_in - (alpha + epsilon)) return SlowWitness{x, a};
    }
    return std::nullopt;
}

template <class T>
struct GadgetCertificate {
    long t = 0;
    std::size_t x = 0;
    StateSet A;
    T alpha, epsilon;
    T pi_A;
    SetSequence B;
    T theta_bound;   // (epsilon / (pi(A) - alpha)) * t
    T achieved;      // max_z E_z[tau_B]
    std::size_t achieved_at = 0;
    std::vector<T> prefix_measures;

    GadgetCertificate() : A(1), alpha(), epsilon(), pi_A(), B(SetSequence::constant(StateSet::full(1))), theta_bound(), achieved() {}
};

// Builds the slow sequence B_s = {y : P^{t-s}(y, A) > pi(A) - alpha} for
// s < t with tail Omega, and verifies every certificate inequality.
template <class T>
GadgetCertificate<T> build_gadget(const MarkovChain<T>& chain, const T& alpha, const T& epsilon,
                                  long t, std::size_t x, const StateSet& a) {
    const std::size_t n = chain.n();
    Distribution<T> pi = stationary(chain);
    T pi_a = measure(pi, a);

    // Column sums P^k(y, A) for k = 1..t, maintained incrementally.
    std::vector<std::vector<T>> hit_prob(static_cast<std::size_t>(t) + 1,
                                         std::vector<T>(n, num_traits<T>::zero()));
    for (std::size_t y = 0; y < n; ++y)
        hit_prob[0][y] = a.contains(y) ? num_traits<T>::one() : num_traits<T>::zero();
    for (long k = 1; k <= t; ++k)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z)
                hit_prob[k][y] += chain.prob(y, z) * hit_prob[k - 1][z];

    T threshold = pi_a - alpha;
    std::vector<StateSet> prefix;
    std::vector<T> prefix_measures;
    for (long s = 0; s < t; ++s) {
        StateSet b(n);
        for (std::size_t y = 0; y < n; ++y)
            if (hit_prob[t - s][y] > threshold) b.add(y);
        T mass = measure(pi, b);
        if (mass < alpha) throw GadgetFalsified("pi(B_s) < alpha at s=" + std::to_string(s));
        prefix_measures.push_back(mass);
        prefix.push_back(std::move(b));
    }

    GadgetCertificate<T> cert;
    cert.t = t;
    cert.x = x;
    cert.A = a;
    cert.alpha = alpha;
    cert.epsilon = epsilon;
    cert.pi_A = pi_a;
    cert.B = SetSequence(std::move(prefix), StateSet::full(n));
    cert.prefix_measures = std::move(prefix_measures);

    // Witness deficit must hold, else (x, A, t) was not a slow witness.
    if (!(pi_a > alpha + epsilon)) throw GadgetFalsified("pi(A) <= alpha + epsilon");
    {
        T p_t_x_a = num_traits<T>::zero();
        MixingScan<T> scan(chain);
        for (long s = 0; s < t; ++s) scan.step();
        for (std::size_t y : a.members()) p_t_x_a += scan.power()(x, y);
        if (!(p_t_x_a < pi_a - (alpha + epsilon))) throw GadgetFalsified("witness deficit fails");
    }

    T best = num_traits<T>::zero();
    for (std::size_t z = 0; z < n; ++z) {
        T val = moving_hitting(chain, z, cert.B);
        if (val > best) {
            best = val;
            cert.achieved_at = z;
        }
    }
    cert.achieved = best;
    cert.theta_bound = threshold == num_traits<T>::zero()
                           ? num_traits<T>::zero()
                           : (epsilon / threshold) * num_traits<T>::ratio(t, 1);
    if (cert.achieved + num_traits<T>::slack() < cert.theta_bound)
        throw GadgetFalsified("achieved expectation below the contradiction threshold");
    return cert;
}

template <class T>
struct SequenceSearchResult {
    T value;
    SetSequence best;
    std::size_t start = 0;
    long evaluated = 0;
    T upper_bound;  // Theorem 1 tripwire value, 0 if tripwire disabled

    SequenceSearchResult() : value(), best(SetSequence::constant(StateSet::full(1))), upper_bound() {}
};

// Exhaustive maximum of moving_hitting over sequences whose prefix (length
// <= horizon) draws from the family and whose tail is the best static
// qualifying set.  Prefix candidates are the inclusion-minimal qualifying
// sets: shrinking any prefix set keeps pointwise more survival mass, so the
// maximum is attained on minimal sets.
template <class T>
SequenceSearchResult<T> t_mov_lower_bound(const MarkovChain<T>& chain, const T& alpha, long horizon,
                                          SetFamily family, long budget = 50'000'000,
                                          bool tripwire = true, long mix_cap = 200000) {
    const std::size_t n = chain.n();
    Distribution<T> pi = stationary(chain);
    std::vector<StateSet> candidates = minimal_qualifying_sets(pi, alpha, family);
    if (candidates.empty()) throw InvalidParams("no qualifying set for alpha");
    std::sort(candidates.begin(), candidates.end());

    HittingMax<T> static_best = t_H(chain, alpha, family);
    const StateSet& tail = static_best.argmax_set;
    std::vector<T> tail_h = static_hitting(chain, tail);

    SequenceSearchResult<T> result;
    result.best = SetSequence::constant(tail);
    result.value = static_best.value;
    result.start = static_best.argmax_state;

    long evaluated = 0;
    std::vector<std::size_t> path;
    // w = sub-probability of X_depth over no-collision histories, already
    // masked at times 0..depth-1, not yet masked at time depth.
    auto dfs = [&](auto&& self, std::size_t start, const std::vector<T>& w, const T& acc,
                   long depth) -> void {
        if (++evaluated > budget) throw SearchSpaceExceeded("sequence search budget exceeded");
        T candidate = acc;
        for (std::size_t y = 0; y < n; ++y) candidate += w[y] * tail_h[y];
        if (candidate > result.value) {
            result.value = candidate;
            result.best = SetSequence(
                [&] {
                    std::vector<StateSet> p;
                    for (std::size_t idx : path) p.push_back(candidates[idx]);
                    return p;
                }(),
                tail);
            result.start = start;
        }
        if (depth >= horizon) return;
        for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
            const StateSet& a = candidates[idx];
            std::vector<T> v(w);
            T mass = num_traits<T>::zero();
            for (std::size_t y = 0; y < n; ++y) {
                if (a.contains(y)) v[y] = num_traits<T>::zero();
                mass += v[y];
            }
            if (mass == num_traits<T>::zero()) continue;
            std::vector<T> next(n, num_traits<T>::zero());
            for (std::size_t z = 0; z < n; ++z) {
                if (v[z] == num_traits<T>::zero()) continue;
                for (std::size_t y = 0; y < n; ++y) {
                    const T& p = chain.prob(z, y);
                    if (p == num_traits<T>::zero()) continue;
                    next[y] += v[z] * p;
                }
            }
            path.push_back(idx);
            self(self, start, next, acc + mass, depth + 1);
            path.pop_back();
        }
    };

    for (std::size_t start = 0; start < n; ++start) {
        std::vector<T> w(n, num_traits<T>::zero());
        w[start] = num_traits<T>::one();
        dfs(dfs, start, w, num_traits<T>::zero(), 0);
    }
    result.evaluated = evaluated;

    if (tripwire) {
        result.upper_bound = theorem1_upper_bound(chain, alpha, mix_cap);
        check_tripwire(result.value, result.upper_bound, "t_mov_lower_bound");
    }
    return result;
}

}  // namespace mchain
