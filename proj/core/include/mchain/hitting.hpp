#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "mchain/chain.hpp"

namespace mchain {

// Subset of chain states with bitset semantics.
class StateSet {
  public:
    explicit StateSet(std::size_t universe) : in_(universe, false), count_(0) {}

    static StateSet full(std::size_t universe) {
        StateSet s(universe);
        std::fill(s.in_.begin(), s.in_.end(), true);
        s.count_ = universe;
        return s;
    }

    static StateSet of(std::size_t universe, const std::vector<std::size_t>& members) {
        StateSet s(universe);
        for (std::size_t m : members) s.add(m);
        return s;
    }

    static StateSet singleton(std::size_t universe, std::size_t member) { return of(universe, {member}); }

    // Cyclic interval [start, start+width) mod n.
    static StateSet interval(std::size_t universe, std::size_t start, std::size_t width) {
        StateSet s(universe);
        for (std::size_t k = 0; k < width; ++k) s.add((start + k) % universe);
        return s;
    }

    static StateSet from_mask(std::size_t universe, unsigned long bits) {
        StateSet s(universe);
        for (std::size_t i = 0; i < universe; ++i)
            if (bits >> i & 1UL) s.add(i);
        return s;
    }

    void add(std::size_t i) {
        if (!in_[i]) {
            in_[i] = true;
            ++count_;
        }
    }
    void remove(std::size_t i) {
        if (in_[i]) {
            in_[i] = false;
            --count_;
        }
    }

    bool contains(std::size_t i) const { return in_[i]; }
    std::size_t size() const { return count_; }
    std::size_t universe() const { return in_.size(); }
    bool empty() const { return count_ == 0; }

    StateSet complement() const {
        StateSet s(universe());
        for (std::size_t i = 0; i < universe(); ++i)
            if (!in_[i]) s.add(i);
        return s;
    }

    std::vector<std::size_t> members() const {
        std::vector<std::size_t> out;
        out.reserve(count_);
        for (std::size_t i = 0; i < universe(); ++i)
            if (in_[i]) out.push_back(i);
        return out;
    }

    bool operator==(const StateSet& other) const { return in_ == other.in_; }
    bool operator<(const StateSet& other) const { return in_ < other.in_; }

  private:
    std::vector<bool> in_;
    std::size_t count_;
};

template <class T>
T measure(const Distribution<T>& pi, const StateSet& set) {
    T acc = num_traits<T>::zero();
    for (std::size_t i : set.members()) acc += pi[i];
    return acc;
}

// Time-indexed target sets: an explicit prefix A_0..A_{T-1} followed by a
// constant nonempty tail A_t = tail for t >= T.
struct SetSequence {
    std::vector<StateSet> prefix;
    StateSet tail;

    SetSequence(std::vector<StateSet> prefix_, StateSet tail_)
        : prefix(std::move(prefix_)), tail(std::move(tail_)) {
        if (tail.empty()) throw InvalidParams("SetSequence tail must be nonempty");
        for (const StateSet& s : prefix)
            if (s.empty()) throw InvalidParams("SetSequence prefix sets must be nonempty");
    }

    static SetSequence constant(StateSet tail_) { return SetSequence({}, std::move(tail_)); }

    const StateSet& at(std::size_t t) const { return t < prefix.size() ? prefix[t] : tail; }

    // Membership in the paper's collection A(alpha): every set has
    // stationary measure at least alpha.
    template <class T>
    bool in_alpha_family(const Distribution<T>& pi, const T& alpha) const {
        for (const StateSet& s : prefix)
            if (measure(pi, s) < alpha) return false;
        return !(measure(pi, tail) < alpha);
    }
};

// Sub-probability mass over states: v(y) = P(X_t = y, no collision yet).
template <class T>
struct SurvivalVector {
    std::vector<T> masses;
    long time = 0;

    T total() const {
        T acc = num_traits<T>::zero();
        for (const T& m : masses) acc += m;
        return acc;
    }
};

template <class T>
SurvivalVector<T> initial_survival(const MarkovChain<T>& chain, std::size_t start, const StateSet& target0) {
    SurvivalVector<T> v{std::vector<T>(chain.n(), num_traits<T>::zero()), 0};
    if (!target0.contains(start)) v.masses[start] = num_traits<T>::one();
    return v;
}

// v'(y) = [sum_z v(z) P(z,y)] * 1(y not in next_target)
template <class T>
SurvivalVector<T> survival_step(const MarkovChain<T>& chain, const SurvivalVector<T>& v,
                                const StateSet& next_target) {
    const std::size_t n = chain.n();
    SurvivalVector<T> out{std::vector<T>(n, num_traits<T>::zero()), v.time + 1};
    for (std::size_t z = 0; z < n; ++z) {
        const T& mass = v.masses[z];
        if (mass == num_traits<T>::zero()) continue;
        for (std::size_t y = 0; y < n; ++y) {
            if (next_target.contains(y)) continue;
            const T& p = chain.prob(z, y);
            if (p == num_traits<T>::zero()) continue;
            out.masses[y] += mass * p;
        }
    }
    return out;
}

// E_x[tau_A] for every start x; zero on A.  Solves (I - P|_{A^c}) h = 1.
template <class T>
std::vector<T> static_hitting(const MarkovChain<T>& chain, const StateSet& target) {
    if (target.empty()) throw InvalidParams("hitting target must be nonempty");
    const std::size_t n = chain.n();
    std::vector<std::size_t> outside;
    std::vector<long> index(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!target.contains(i)) {
            index[i] = static_cast<long>(outside.size());
            outside.push_back(i);
        }
    }
    std::vector<T> h(n, num_traits<T>::zero());
    if (outside.empty()) return h;

    const std::size_t m = outside.size();
    Matrix<T> a(m, m);
    std::vector<T> rhs(m, num_traits<T>::one());
    for (std::size_t r = 0; r < m; ++r) {
        std::size_t x = outside[r];
        for (std::size_t c = 0; c < m; ++c) a(r, c) = -chain.prob(x, outside[c]);
        a(r, r) += num_traits<T>::one();
    }
    std::vector<T> sol = solve_linear(a, rhs);
    for (std::size_t r = 0; r < m; ++r) h[outside[r]] = sol[r];
    return h;
}

// E_start[tau] for a moving target: survival recursion over the prefix,
// then the static tail term.  tau = inf{t >= 0 : X_t in A_t}.
template <class T>
T moving_hitting(const MarkovChain<T>& chain, std::size_t start, const SetSequence& seq) {
    std::vector<T> tail_h = static_hitting(chain, seq.tail);
    SurvivalVector<T> v = initial_survival(chain, start, seq.at(0));
    T expected = num_traits<T>::zero();
    const std::size_t prefix_len = seq.prefix.size();
    for (std::size_t t = 0; t < prefix_len; ++t) {
        expected += v.total();
        v = survival_step(chain, v, seq.at(t + 1));
    }
    for (std::size_t y = 0; y < chain.n(); ++y) expected += v.masses[y] * tail_h[y];
    return expected;
}

enum class SetFamily { All, Minimal, Intervals, SingletonComplements };

inline const char* to_string(SetFamily f) {
    switch (f) {
        case SetFamily::All: return "all";
        case SetFamily::Minimal: return "minimal";
        case SetFamily::Intervals: return "intervals";
        case SetFamily::SingletonComplements: return "singleton-complements";
    }
    return "?";
}

inline std::optional<SetFamily> parse_set_family(const std::string& name) {
    if (name == "all") return SetFamily::All;
    if (name == "minimal") return SetFamily::Minimal;
    if (name == "intervals") return SetFamily::Intervals;
    if (name == "singleton-complements") return SetFamily::SingletonComplements;
    return std::nullopt;
}

// All sets of the family with pi(A) >= alpha.  For Minimal, only the
// inclusion-minimal qualifying sets (removing any element disqualifies).
template <class T>
std::vector<StateSet> qualifying_sets(const Distribution<T>& pi, const T& alpha, SetFamily family) {
    const std::size_t n = pi.size();
    std::vector<StateSet> out;
    switch (family) {
        case SetFamily::All:
        case SetFamily::Minimal: {
            if (n > 16) throw StateLimitExceeded("subset enumeration limited to n <= 16");
            for (unsigned long bits = 1; bits < (1UL << n); ++bits) {
                StateSet s = StateSet::from_mask(n, bits);
                if (measure(pi, s) < alpha) continue;
                if (family == SetFamily::Minimal) {
                    bool minimal = true;
                    for (std::size_t i : s.members()) {
                        StateSet smaller = s;
                        smaller.remove(i);
                        if (!smaller.empty() && !(measure(pi, smaller) < alpha)) {
                            minimal = false;
                            break;
                        }
                    }
                    if (!minimal) continue;
                }
                out.push_back(s);
            }
            break;
        }
        case SetFamily::Intervals: {
            for (std::size_t width = 1; width < n; ++width) {
                for (std::size_t start = 0; start < n; ++start) {
                    StateSet s = StateSet::interval(n, start, width);
                    if (!(measure(pi, s) < alpha)) out.push_back(s);
                }
            }
            StateSet whole = StateSet::full(n);
            if (!(measure(pi, whole) < alpha)) out.push_back(whole);
            break;
        }
        case SetFamily::SingletonComplements: {
            for (std::size_t i = 0; i < n; ++i) {
                StateSet s = StateSet::full(n);
                s.remove(i);
                if (s.empty()) continue;
                if (!(measure(pi, s) < alpha)) out.push_back(s);
            }
            break;
        }
    }
    return out;
}

// Inclusion-minimal members of qualifying_sets(family).  Hitting times are
// anti-monotone in the target, so maxima over a family are attained here.
template <class T>
std::vector<StateSet> minimal_qualifying_sets(const Distribution<T>& pi, const T& alpha, SetFamily family) {
    std::vector<StateSet> all = qualifying_sets(pi, alpha, family);
    if (family == SetFamily::Minimal) return all;
    std::vector<StateSet> out;
    for (const StateSet& s : all) {
        bool minimal = true;
        for (const StateSet& other : all) {
            if (other.size() >= s.size() || other == s) continue;
            bool subset = true;
            for (std::size_t i : other.members())
                if (!s.contains(i)) { subset = false; break; }
            // Strict subset must disqualify; here it qualifies, so s is not minimal.
            if (subset) { minimal = false; break; }
        }
        if (minimal) out.push_back(s);
    }
    return out;
}

template <class T>
struct HittingMax {
    T value;
    std::size_t argmax_state;
    StateSet argmax_set;
};

// t_H(alpha) = max over starts x and family sets A with pi(A) >= alpha of E_x[tau_A].
template <class T>
HittingMax<T> t_H(const MarkovChain<T>& chain, const T& alpha, SetFamily family) {
    if (!(alpha > num_traits<T>::zero()) || alpha > num_traits<T>::one())
        throw InvalidParams("alpha must lie in (0,1]");
    Distribution<T> pi = stationary(chain);
    std::vector<StateSet> sets = family == SetFamily::All
                                     ? qualifying_sets(pi, alpha, family)
                                     : minimal_qualifying_sets(pi, alpha, family);
    if (sets.empty()) throw InvalidParams("no qualifying set for alpha");
    HittingMax<T> best{num_traits<T>::zero(), 0, StateSet::full(chain.n())};
    bool first = true;
    for (const StateSet& a : sets) {
        std::vector<T> h = static_hitting(chain, a);
        for (std::size_t x = 0; x < chain.n(); ++x) {
            if (first || h[x] > best.value) {
                best = HittingMax<T>{h[x], x, a};
                first = false;
            }
        }
    }
    return best;
}

}  // namespace mchain
