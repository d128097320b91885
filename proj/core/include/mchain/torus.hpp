#pragma once

#include <array>
#include <cstdlib>
#include <vector>

#include "mchain/chain.hpp"
#include "mchain/hitting.hpp"

namespace mchain {

// Index layout for Z_n^d: mixed-radix with coordinate 0 most significant.
struct TorusGeom {
    int n = 0;
    int d = 0;

    TorusGeom(int n_, int d_) : n(n_), d(d_) {
        if (n < 3 || d < 1) throw InvalidParams("torus needs n >= 3, d >= 1");
    }

    std::size_t states() const {
        std::size_t s = 1;
        for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(n);
        return s;
    }

    std::size_t index(const std::vector<int>& coords) const {
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(coords[i]);
        return idx;
    }

    std::vector<int> point(std::size_t idx) const {
        std::vector<int> coords(d);
        for (int i = d - 1; i >= 0; --i) {
            coords[i] = static_cast<int>(idx % static_cast<std::size_t>(n));
            idx /= static_cast<std::size_t>(n);
        }
        return coords;
    }

    int cycle_dist(int a, int b) const {
        int diff = std::abs(a - b) % n;
        return std::min(diff, n - diff);
    }

    // Graph (L1) distance on the discrete torus.
    int dist(std::size_t x, std::size_t y) const {
        std::vector<int> a = point(x), b = point(y);
        int total = 0;
        for (int i = 0; i < d; ++i) total += cycle_dist(a[i], b[i]);
        return total;
    }

    std::size_t antipode() const {
        std::vector<int> coords(d, n / 2);
        return index(coords);
    }
};

// p(x,y) = 1(x=y)/2 + 1(|x-y|=1)/(4d)
template <class T>
MarkovChain<T> lazy_torus_kernel(int n, int d, std::size_t state_budget = 100000) {
    TorusGeom geom(n, d);
    const std::size_t size = geom.states();
    if (size > state_budget) throw StateLimitExceeded("torus state count exceeds budget");
    Matrix<T> m(size, size);
    const T hold = num_traits<T>::ratio(1, 2);
    const T step = num_traits<T>::ratio(1, 4 * d);
    for (std::size_t x = 0; x < size; ++x) {
        m(x, x) = hold;
        std::vector<int> coords = geom.point(x);
        for (int i = 0; i < d; ++i) {
            for (int delta : {1, n - 1}) {
                std::vector<int> nb = coords;
                nb[i] = (nb[i] + delta) % n;
                m(x, geom.index(nb)) += step;
            }
        }
    }
    return MarkovChain<T>(m);
}

// Non-lazy variant; periodic for even n, used to show laziness is necessary.
template <class T>
Matrix<T> torus_kernel_nonlazy_matrix(int n, int d) {
    TorusGeom geom(n, d);
    const std::size_t size = geom.states();
    Matrix<T> m(size, size);
    const T step = num_traits<T>::ratio(1, 2 * d);
    for (std::size_t x = 0; x < size; ++x) {
        std::vector<int> coords = geom.point(x);
        for (int i = 0; i < d; ++i) {
            for (int delta : {1, n - 1}) {
                std::vector<int> nb = coords;
                nb[i] = (nb[i] + delta) % n;
                m(x, geom.index(nb)) += step;
            }
        }
    }
    return m;
}

// An involutive isometry with explicit H+/H-/H0 partition.
class Reflection {
  public:
    enum class Part { Plus, Minus, Zero };

    Reflection(std::vector<std::size_t> map, std::vector<Part> part);

    static Reflection identity(std::size_t size);

    std::size_t size() const { return map_.size(); }
    std::size_t apply(std::size_t x) const { return map_[x]; }
    Part part(std::size_t x) const { return part_[x]; }

    // Exhaustive check of the reflection axioms against a distance.
    // Throws InvalidCase naming the first failing axiom.
    void validate(const TorusGeom& geom) const;

  private:
    std::vector<std::size_t> map_;
    std::vector<Part> part_;
};

// sigma(x) = (c - x) mod n on the cycle, with the canonical arc partition.
// flip exchanges H+ and H-.
Reflection cycle_reflection(int n, int c, bool flip);

// The cycle reflection applied in one coordinate of Z_n^d.
Reflection coordinate_reflection(const TorusGeom& geom, int axis, int c, bool flip);

// Reflection whose polarization maps Z_n \ {target} to Z_n \ {a} while
// fixing {0} and Z_n \ {a}.  Throws InvalidCase when no side assignment
// satisfies the required fixed-point behaviour.
Reflection antipode_reflection(int n, int target, int a);

// Two-point rearrangement of a set.
StateSet polarize_set(const StateSet& a, const Reflection& sigma);

// The combinatorial two-point inequality: nonnegative functions on {+,-}
// with pair kernels k_ij(e,e') = a_ij + b_ij 1(e=e').
struct TwoPointInstance {
    int n_funcs = 0;
    std::vector<std::array<Rat, 2>> phi;  // phi[i][0] = phi_i(+), phi[i][1] = phi_i(-)
    Matrix<Rat> a, b;                     // upper triangle (i <= j) is used
};

Rat two_point_J(const TwoPointInstance& inst);
TwoPointInstance polarize_instance(const TwoPointInstance& inst);

struct MonotoneCheck {
    Rat lhs, rhs;
    bool pass = false;
};

// P(X_1 in D_1,...,X_t in D_t | X_0 = b) against the sigma-polarized
// instance, both sides by exact survival recursion.
MonotoneCheck check_survival_monotone(int n, int d, std::size_t b, const std::vector<StateSet>& targets,
                                      const Reflection& sigma);

struct Theorem2Result {
    Rat max_survival;
    Rat antipode_survival;
    std::vector<std::vector<std::size_t>> maximizers;  // trajectories f(1..t)
    bool antipode_is_max = false;
    bool pass = false;  // max == antipode value
};

// Exhaustive maximum of P_0(X_1 != f(1),...,X_t != f(t)) over all
// trajectories f, compared with the constant-antipode trajectory.
Theorem2Result theorem2_bruteforce(int n, int d, int t, bool lazy = true,
                                   long long eval_budget = 10'000'000);

}  // namespace mchain
