#include "mchain/torus.hpp"

#include <algorithm>
#include <string>

namespace mchain {

Reflection::Reflection(std::vector<std::size_t> map, std::vector<Part> part)
    : map_(std::move(map)), part_(std::move(part)) {
    if (map_.size() != part_.size()) throw InvalidParams("reflection map/part size mismatch");
}

Reflection Reflection::identity(std::size_t size) {
    std::vector<std::size_t> map(size);
    for (std::size_t i = 0; i < size; ++i) map[i] = i;
    return Reflection(std::move(map), std::vector<Part>(size, Part::Zero));
}

void Reflection::validate(const TorusGeom& geom) const {
    const std::size_t size = map_.size();
    if (size != geom.states()) throw InvalidCase("reflection size does not match geometry");
    for (std::size_t x = 0; x < size; ++x) {
        if (map_[map_[x]] != x) throw InvalidCase("sigma is not an involution");
        if (part_[x] == Part::Zero && map_[x] != x) throw InvalidCase("H0 point not fixed");
        if (part_[x] == Part::Plus && part_[map_[x]] != Part::Minus)
            throw InvalidCase("sigma(H+) not contained in H-");
        if (part_[x] == Part::Minus && part_[map_[x]] != Part::Plus)
            throw InvalidCase("sigma(H-) not contained in H+");
    }
    for (std::size_t x = 0; x < size; ++x) {
        for (std::size_t y = 0; y < size; ++y) {
            if (geom.dist(map_[x], map_[y]) != geom.dist(x, y)) throw InvalidCase("sigma is not an isometry");
            if (part_[x] == Part::Plus && part_[y] == Part::Plus &&
                !(geom.dist(x, y) < geom.dist(x, map_[y])))
                throw InvalidCase("H+ points not strictly closer to each other than to mirrors");
        }
    }
}

namespace {

Reflection::Part arc_part(int n, int c, bool flip, int x) {
    // Position on the doubled circle relative to the reflection axis; the
    // axis sits at s = 0 and s = n.
    int s = ((2 * x - c) % (2 * n) + 2 * n) % (2 * n);
    if (s == 0 || s == n) return Reflection::Part::Zero;
    bool plus_arc = s < n;
    if (flip) plus_arc = !plus_arc;
    return plus_arc ? Reflection::Part::Plus : Reflection::Part::Minus;
}

}  // namespace

Reflection cycle_reflection(int n, int c, bool flip) {
    if (n < 3) throw InvalidParams("cycle reflection needs n >= 3");
    std::vector<std::size_t> map(static_cast<std::size_t>(n));
    std::vector<Reflection::Part> part(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        map[static_cast<std::size_t>(x)] = static_cast<std::size_t>(((c - x) % n + n) % n);
        part[static_cast<std::size_t>(x)] = arc_part(n, c, flip, x);
    }
    return Reflection(std::move(map), std::move(part));
}

Reflection coordinate_reflection(const TorusGeom& geom, int axis, int c, bool flip) {
    if (axis < 0 || axis >= geom.d) throw InvalidParams("reflection axis out of range");
    const std::size_t size = geom.states();
    std::vector<std::size_t> map(size);
    std::vector<Reflection::Part> part(size);
    for (std::size_t x = 0; x < size; ++x) {
        std::vector<int> coords = geom.point(x);
        int xi = coords[axis];
        coords[axis] = ((c - xi) % geom.n + geom.n) % geom.n;
        map[x] = geom.index(coords);
        part[x] = arc_part(geom.n, c, flip, xi);
    }
    return Reflection(std::move(map), std::move(part));
}

StateSet polarize_set(const StateSet& a, const Reflection& sigma) {
    if (a.universe() != sigma.size()) throw LengthMismatch("polarize_set universe mismatch");
    StateSet out(a.universe());
    for (std::size_t x = 0; x < a.universe(); ++x) {
        std::size_t sx = sigma.apply(x);
        switch (sigma.part(x)) {
            case Reflection::Part::Plus:
                if (a.contains(x) || a.contains(sx)) out.add(x);
                break;
            case Reflection::Part::Minus:
                if (a.contains(x) && a.contains(sx)) out.add(x);
                break;
            case Reflection::Part::Zero:
                if (a.contains(x)) out.add(x);
                break;
        }
    }
    return out;
}

Reflection antipode_reflection(int n, int target, int a) {
    TorusGeom geom(n, 1);
    if (target < 0 || target >= n || a < 0 || a >= n) throw InvalidParams("points out of range");
    if (target == a) return Reflection::identity(static_cast<std::size_t>(n));

    const int c = a + target;  // kept unreduced: c and c+n give opposite arc sides
    auto hole = [n](int p) {
        StateSet s = StateSet::full(static_cast<std::size_t>(n));
        s.remove(static_cast<std::size_t>(p));
        return s;
    };
    for (bool flip : {false, true}) {
        Reflection sigma = cycle_reflection(n, c, flip);
        if (sigma.part(static_cast<std::size_t>(target)) != Reflection::Part::Plus) continue;
        try {
            sigma.validate(geom);
        } catch (const InvalidCase&) {
            continue;
        }
        StateSet zero = StateSet::singleton(static_cast<std::size_t>(n), 0);
        if (!(polarize_set(hole(target), sigma) == hole(a))) continue;
        if (!(polarize_set(zero, sigma) == zero)) continue;
        if (!(polarize_set(hole(a), sigma) == hole(a))) continue;
        return sigma;
    }
    throw InvalidCase("no side assignment polarizes the target hole to the antipode hole; n=" +
                      std::to_string(n) + " target=" + std::to_string(target) + " a=" + std::to_string(a));
}

Rat two_point_J(const TwoPointInstance& inst) {
    const int n = inst.n_funcs;
    Rat total(0);
    for (unsigned long signs = 0; signs < (1UL << n); ++signs) {
        auto eps = [&](int i) { return (signs >> i & 1UL) != 0 ? 1 : 0; };  // 0 = '+', 1 = '-'
        Rat term(1);
        for (int i = 0; i < n; ++i) term *= inst.phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(eps(i))];
        if (term == 0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                Rat k = inst.a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                if (eps(i) == eps(j)) k += inst.b(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                term *= k;
            }
        total += term;
    }
    return total;
}

TwoPointInstance polarize_instance(const TwoPointInstance& inst) {
    TwoPointInstance out = inst;
    for (auto& p : out.phi) {
        Rat hi = std::max(p[0], p[1]);
        Rat lo = std::min(p[0], p[1]);
        p[0] = hi;
        p[1] = lo;
    }
    return out;
}

MonotoneCheck check_survival_monotone(int n, int d, std::size_t b, const std::vector<StateSet>& targets,
                                      const Reflection& sigma) {
    MarkovChain<Rat> chain = lazy_torus_kernel<Rat>(n, d);
    if (sigma.size() != chain.n()) throw LengthMismatch("reflection does not match torus size");
    for (const StateSet& t : targets)
        if (t.universe() != chain.n()) throw LengthMismatch("target set universe mismatch");

    auto survival = [&](std::size_t start, const std::vector<StateSet>& keep) {
        std::vector<Rat> v(chain.n(), Rat(0));
        v[start] = 1;
        for (const StateSet& k : keep) {
            std::vector<Rat> next(chain.n(), Rat(0));
            for (std::size_t z = 0; z < chain.n(); ++z) {
                if (v[z] == 0) continue;
                for (std::size_t y = 0; y < chain.n(); ++y) {
                    if (!k.contains(y)) continue;
                    const Rat& p = chain.prob(z, y);
                    if (p == 0) continue;
                    next[y] += v[z] * p;
                }
            }
            v.swap(next);
        }
        Rat total(0);
        for (const Rat& m : v) total += m;
        return total;
    };

    // {b}^sigma is a singleton: b itself unless b sits in H- with a mirror in H+.
    std::size_t b_pol = b;
    if (sigma.part(b) == Reflection::Part::Minus) b_pol = sigma.apply(b);

    std::vector<StateSet> polarized;
    polarized.reserve(targets.size());
    for (const StateSet& t : targets) polarized.push_back(polarize_set(t, sigma));

    MonotoneCheck check;
    check.lhs = survival(b, targets);
    check.rhs = survival(b_pol, polarized);
    check.pass = !(check.lhs > check.rhs);
    return check;
}

Theorem2Result theorem2_bruteforce(int n, int d, int t, bool lazy, long long eval_budget) {
    TorusGeom geom(n, d);
    const std::size_t size = geom.states();
    {
        long long evals = 1;
        for (int i = 0; i < t; ++i) {
            evals *= static_cast<long long>(size);
            if (evals > eval_budget) throw SearchSpaceExceeded("trajectory space exceeds budget");
        }
    }
    MarkovChain<Rat> chain = lazy ? lazy_torus_kernel<Rat>(n, d)
                                  : MarkovChain<Rat>(torus_kernel_nonlazy_matrix<Rat>(n, d));

    Theorem2Result result;
    result.max_survival = -1;

    std::vector<std::size_t> traj;
    auto dfs = [&](auto&& self, const std::vector<Rat>& v, int depth) -> void {
        if (depth == t) {
            Rat total(0);
            for (const Rat& m : v) total += m;
            if (total > result.max_survival) {
                result.max_survival = total;
                result.maximizers.clear();
            }
            if (total == result.max_survival) result.maximizers.push_back(traj);
            return;
        }
        std::vector<Rat> w(size, Rat(0));
        for (std::size_t z = 0; z < size; ++z) {
            if (v[z] == 0) continue;
            for (std::size_t y = 0; y < size; ++y) {
                const Rat& p = chain.prob(z, y);
                if (p == 0) continue;
                w[y] += v[z] * p;
            }
        }
        for (std::size_t f = 0; f < size; ++f) {
            std::vector<Rat> masked(w);
            masked[f] = 0;
            traj.push_back(f);
            self(self, masked, depth + 1);
            traj.pop_back();
        }
    };

    std::vector<Rat> start(size, Rat(0));
    start[0] = 1;
    dfs(dfs, start, 0);

    // Constant-antipode trajectory.
    const std::size_t a = geom.antipode();
    std::vector<Rat> v = start;
    for (int s = 0; s < t; ++s) {
        std::vector<Rat> w(size, Rat(0));
        for (std::size_t z = 0; z < size; ++z) {
            if (v[z] == 0) continue;
            for (std::size_t y = 0; y < size; ++y) {
                const Rat& p = chain.prob(z, y);
                if (p == 0) continue;
                w[y] += v[z] * p;
            }
        }
        w[a] = 0;
        v.swap(w);
    }
    result.antipode_survival = 0;
    for (const Rat& m : v) result.antipode_survival += m;

    result.pass = result.max_survival == result.antipode_survival;
    std::vector<std::size_t> antipode_traj(static_cast<std::size_t>(t), a);
    result.antipode_is_max =
        std::find(result.maximizers.begin(), result.maximizers.end(), antipode_traj) != result.maximizers.end();
    return result;
}

}  // namespace mchain
