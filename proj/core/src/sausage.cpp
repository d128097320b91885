#include "mchain/sausage.hpp"

#include <algorithm>
#include <unordered_set>

#include "mchain/errors.hpp"

namespace mchain {

LatticeTrajectory LatticeTrajectory::zero(int d, int t) {
    LatticeTrajectory traj;
    traj.d = d;
    traj.offsets.assign(static_cast<std::size_t>(t) + 1, LatticePoint(static_cast<std::size_t>(d), 0));
    return traj;
}

LatticeTrajectory LatticeTrajectory::linear_drift(int d, int t, const LatticePoint& per_step) {
    if (static_cast<int>(per_step.size()) != d) throw InvalidParams("drift dimension mismatch");
    LatticeTrajectory traj;
    traj.d = d;
    for (int s = 0; s <= t; ++s) {
        LatticePoint p(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] = s * per_step[static_cast<std::size_t>(i)];
        traj.offsets.push_back(std::move(p));
    }
    return traj;
}

LatticeSet box_points(int d, int n, const LatticePoint& center) {
    if (static_cast<int>(center.size()) != d) throw InvalidParams("box center dimension mismatch");
    LatticeSet out;
    LatticePoint p(static_cast<std::size_t>(d));
    auto rec = [&](auto&& self, int coord) -> void {
        if (coord == d) {
            out.insert(p);
            return;
        }
        for (int v = center[static_cast<std::size_t>(coord)] - n; v <= center[static_cast<std::size_t>(coord)] + n; ++v) {
            p[static_cast<std::size_t>(coord)] = v;
            self(self, coord + 1);
        }
    };
    rec(rec, 0);
    return out;
}

namespace {

// Walk positions within L-infinity radius r of the origin, with a dense index.
struct WalkBox {
    int d, r, side;
    std::size_t states;

    WalkBox(int d_, int r_) : d(d_), r(r_), side(2 * r_ + 1) {
        states = 1;
        for (int i = 0; i < d; ++i) states *= static_cast<std::size_t>(side);
    }

    std::size_t index(const LatticePoint& p) const {
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i)
            idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(p[static_cast<std::size_t>(i)] + r);
        return idx;
    }

    LatticePoint point(std::size_t idx) const {
        LatticePoint p(static_cast<std::size_t>(d));
        for (int i = d - 1; i >= 0; --i) {
            p[static_cast<std::size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(side)) - r;
            idx /= static_cast<std::size_t>(side);
        }
        return p;
    }

    bool inside(const LatticePoint& p) const {
        for (int i = 0; i < d; ++i)
            if (p[static_cast<std::size_t>(i)] < -r || p[static_cast<std::size_t>(i)] > r) return false;
        return true;
    }
};

}  // namespace

Rat expected_union_volume(int d, const std::vector<LatticeSet>& shapes, long long budget) {
    if (shapes.empty()) throw InvalidParams("need at least D_0");
    const int t = static_cast<int>(shapes.size()) - 1;

    // Bounding box for x0: x0 in X_s + D_s with |X_s|_inf <= s.
    std::vector<int> lo(static_cast<std::size_t>(d), 0), hi(static_cast<std::size_t>(d), 0);
    bool first = true;
    for (int s = 0; s <= t; ++s) {
        for (const LatticePoint& p : shapes[static_cast<std::size_t>(s)]) {
            for (int i = 0; i < d; ++i) {
                int l = p[static_cast<std::size_t>(i)] - s;
                int h = p[static_cast<std::size_t>(i)] + s;
                if (first || l < lo[static_cast<std::size_t>(i)]) lo[static_cast<std::size_t>(i)] = l;
                if (first || h > hi[static_cast<std::size_t>(i)]) hi[static_cast<std::size_t>(i)] = h;
            }
            first = false;
        }
    }
    if (first) return Rat(0);  // all shapes empty

    long long box_volume = 1;
    for (int i = 0; i < d; ++i)
        box_volume *= static_cast<long long>(hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)] + 1);

    WalkBox walk(d, t);
    if (box_volume * static_cast<long long>(walk.states) * std::max(1, t) > budget)
        throw BudgetExceeded("sausage bounding box too large for exact computation");

    const Rat hold = make_ratio(1, 2);
    const Rat step = make_ratio(1, 4 * d);

    Rat total(0);
    LatticePoint x0(static_cast<std::size_t>(d));
    auto for_each_x0 = [&](auto&& self, int coord) -> void {
        if (coord < d) {
            for (int v = lo[static_cast<std::size_t>(coord)]; v <= hi[static_cast<std::size_t>(coord)]; ++v) {
                x0[static_cast<std::size_t>(coord)] = v;
                self(self, coord + 1);
            }
            return;
        }
        // Survival recursion: mass over walk positions never having entered
        // x0 - D_s.  Membership: pos in x0 - D_s  <=>  x0 - pos in D_s.
        auto masked = [&](const LatticePoint& pos, int s) {
            LatticePoint diff(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i)
                diff[static_cast<std::size_t>(i)] = x0[static_cast<std::size_t>(i)] - pos[static_cast<std::size_t>(i)];
            return shapes[static_cast<std::size_t>(s)].count(diff) > 0;
        };
        std::vector<Rat> v(walk.states, Rat(0));
        LatticePoint origin(static_cast<std::size_t>(d), 0);
        if (masked(origin, 0)) {
            total += 1;  // collision at time 0 with probability one
            return;
        }
        v[walk.index(origin)] = 1;
        for (int s = 1; s <= t; ++s) {
            std::vector<Rat> next(walk.states, Rat(0));
            for (std::size_t z = 0; z < walk.states; ++z) {
                if (v[z] == 0) continue;
                LatticePoint pos = walk.point(z);
                if (!masked(pos, s)) next[z] += v[z] * hold;
                for (int i = 0; i < d; ++i) {
                    for (int delta : {-1, 1}) {
                        LatticePoint nb = pos;
                        nb[static_cast<std::size_t>(i)] += delta;
                        if (!walk.inside(nb) || masked(nb, s)) continue;
                        next[walk.index(nb)] += v[z] * step;
                    }
                }
            }
            v.swap(next);
        }
        Rat survive(0);
        for (const Rat& m : v) survive += m;
        total += Rat(1) - survive;
    };
    for_each_x0(for_each_x0, 0);
    return total;
}

Rat expected_sausage_exact(int d, int n, const LatticeTrajectory& traj, long long budget) {
    if (traj.d != d) throw InvalidParams("trajectory dimension mismatch");
    if (n < 0) throw InvalidParams("box half-width must be nonnegative");
    std::vector<LatticeSet> shapes;
    shapes.reserve(traj.offsets.size());
    for (const LatticePoint& f : traj.offsets) shapes.push_back(box_points(d, n, f));
    return expected_union_volume(d, shapes, budget);
}

McEstimate expected_sausage_mc(int d, int n, const LatticeTrajectory& traj, long runs,
                               std::uint64_t seed) {
    if (traj.d != d) throw InvalidParams("trajectory dimension mismatch");
    if (runs < 1000) throw InvalidParams("need at least 1000 runs");
    const int t = static_cast<int>(traj.offsets.size()) - 1;

    // Pack small coordinates into one key for the per-run union set.
    auto key = [&](const LatticePoint& p) {
        std::uint64_t k = 0;
        for (int i = 0; i < d; ++i)
            k = k * 1000003ULL + static_cast<std::uint64_t>(p[static_cast<std::size_t>(i)] + 500000);
        return k;
    };

    double sum = 0.0, sumsq = 0.0;
    for (long r = 0; r < runs; ++r) {
        std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(r));
        std::uniform_int_distribution<int> lazy_coin(0, 1);
        std::uniform_int_distribution<int> direction(0, 2 * d - 1);
        LatticePoint x(static_cast<std::size_t>(d), 0);
        std::unordered_set<std::uint64_t> covered;
        LatticePoint cell(static_cast<std::size_t>(d));
        for (int s = 0; s <= t; ++s) {
            if (s > 0 && lazy_coin(rng) == 1) {
                int dir = direction(rng);
                x[static_cast<std::size_t>(dir / 2)] += dir % 2 == 0 ? 1 : -1;
            }
            // Box Q_n around x + f(s).
            LatticePoint center(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i)
                center[static_cast<std::size_t>(i)] =
                    x[static_cast<std::size_t>(i)] + traj.offsets[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
            auto rec = [&](auto&& self, int coord) -> void {
                if (coord == d) {
                    covered.insert(key(cell));
                    return;
                }
                for (int v = center[static_cast<std::size_t>(coord)] - n;
                     v <= center[static_cast<std::size_t>(coord)] + n; ++v) {
                    cell[static_cast<std::size_t>(coord)] = v;
                    self(self, coord + 1);
                }
            };
            rec(rec, 0);
        }
        double vol = static_cast<double>(covered.size());
        sum += vol;
        sumsq += vol * vol;
    }
    McEstimate est;
    est.runs = runs;
    est.mean = sum / static_cast<double>(runs);
    double var = (sumsq - sum * est.mean) / std::max(1.0, static_cast<double>(runs - 1));
    est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(runs));
    return est;
}

LatticeSet polarize_lattice(const LatticeSet& a, const LatticeReflection& sigma) {
    LatticeSet out;
    for (const LatticePoint& x : a) {
        // Points that stay: H0, H+ always (x or sigma x present), H- only if
        // the mirror is also in the set.
        int side = sigma.side(x);
        if (side >= 0) {
            out.insert(x);
        } else if (a.count(sigma.apply(x)) > 0) {
            out.insert(x);
        }
    }
    for (const LatticePoint& x : a) {
        if (sigma.side(x) < 0) {
            LatticePoint mirror = sigma.apply(x);
            if (a.count(mirror) == 0) out.insert(mirror);  // mass pushed to H+
        }
    }
    return out;
}

VolumeCheck check_prelim_volume(int d, const LatticeReflection& sigma,
                                const std::vector<LatticeSet>& shapes, long long budget) {
    for (const LatticeSet& s : shapes) {
        for (const LatticePoint& p : s) {
            LatticePoint neg(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) neg[i] = -p[i];
            if (s.count(neg) == 0) throw SymmetryViolation("D_i is not symmetric around the origin");
        }
    }
    std::vector<LatticeSet> polarized;
    polarized.reserve(shapes.size());
    for (const LatticeSet& s : shapes) polarized.push_back(polarize_lattice(s, sigma));

    VolumeCheck check;
    check.lhs = expected_union_volume(d, shapes, budget);
    check.rhs = expected_union_volume(d, polarized, budget);
    check.pass = !(check.lhs < check.rhs);
    return check;
}

}  // namespace mchain
