#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "mchain/mc.hpp"
#include "mchain/rational.hpp"

namespace mchain {

using LatticePoint = std::vector<int>;
using LatticeSet = std::set<LatticePoint>;

// Time-indexed drift offsets f(0..t) on Z^d.
struct LatticeTrajectory {
    int d = 1;
    std::vector<LatticePoint> offsets;

    static LatticeTrajectory zero(int d, int t);
    static LatticeTrajectory linear_drift(int d, int t, const LatticePoint& per_step);
};

// Q_n(center) = [-n+c_1, n+c_1] x ... x [-n+c_d, n+c_d]
LatticeSet box_points(int d, int n, const LatticePoint& center);

// E[vol(union_s (X_s + D_s))] for a lazy simple random walk on Z^d started
// at 0, computed exactly by masked survival recursions over a bounding box.
// shapes[s] = D_s, s = 0..t.
Rat expected_union_volume(int d, const std::vector<LatticeSet>& shapes,
                          long long budget = 50'000'000);

// E[vol(union_s (X_s + f(s) + Q_n))]
Rat expected_sausage_exact(int d, int n, const LatticeTrajectory& traj,
                           long long budget = 50'000'000);

McEstimate expected_sausage_mc(int d, int n, const LatticeTrajectory& traj, long runs,
                               std::uint64_t seed);

// Axis-aligned hyperplane reflection x -> (..., c - x_axis, ...) on Z^d.
struct LatticeReflection {
    int axis = 0;
    int c = 0;
    bool flip = false;  // exchanges H+ and H-

    LatticePoint apply(const LatticePoint& x) const {
        LatticePoint y = x;
        y[static_cast<std::size_t>(axis)] = c - x[static_cast<std::size_t>(axis)];
        return y;
    }

    // +1 for H+, -1 for H-, 0 for the fixed hyperplane.
    int side(const LatticePoint& x) const {
        int s = 2 * x[static_cast<std::size_t>(axis)] - c;
        if (s == 0) return 0;
        int sign = s < 0 ? 1 : -1;
        return flip ? -sign : sign;
    }
};

LatticeSet polarize_lattice(const LatticeSet& a, const LatticeReflection& sigma);

struct VolumeCheck {
    Rat lhs, rhs;
    bool pass = false;
};

// E[vol union (X_s + D_s)] >= E[vol union (X_s + D_s^sigma)] for sets that
// are symmetric around the origin.  Throws SymmetryViolation otherwise.
VolumeCheck check_prelim_volume(int d, const LatticeReflection& sigma,
                                const std::vector<LatticeSet>& shapes,
                                long long budget = 50'000'000);

}  // namespace mchain
