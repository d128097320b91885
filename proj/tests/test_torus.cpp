#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mchain/adversary.hpp"
#include "mchain/generators.hpp"
#include "mchain/mc.hpp"
#include "mchain/torus.hpp"

using namespace mchain;

namespace {

TwoPointInstance random_instance(int max_funcs, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nf(1, max_funcs);
    std::uniform_int_distribution<int> num(0, 6);
    std::uniform_int_distribution<int> den(1, 6);
    TwoPointInstance inst;
    inst.n_funcs = nf(rng);
    const std::size_t n = static_cast<std::size_t>(inst.n_funcs);
    inst.a = Matrix<Rat>(n, n);
    inst.b = Matrix<Rat>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        inst.phi.push_back({make_ratio(num(rng), den(rng)), make_ratio(num(rng), den(rng))});
        for (std::size_t j = 0; j < n; ++j) {
            inst.a(i, j) = make_ratio(num(rng), den(rng));
            inst.b(i, j) = make_ratio(num(rng), den(rng));
        }
    }
    return inst;
}

}  // namespace

TEST_CASE("lazy torus kernel") {
    SUBCASE("cycle Z_3") {
        auto chain = lazy_torus_kernel<Rat>(3, 1);
        CHECK(chain.prob(0, 0) == make_ratio(1, 2));
        CHECK(chain.prob(0, 1) == make_ratio(1, 4));
        CHECK(chain.prob(0, 2) == make_ratio(1, 4));
    }
    SUBCASE("Z_4^2: four neighbor entries of 1/8") {
        auto chain = lazy_torus_kernel<Rat>(4, 2);
        TorusGeom geom(4, 2);
        std::size_t x = geom.index({1, 2});
        CHECK(chain.prob(x, x) == make_ratio(1, 2));
        int neighbors = 0;
        Rat total(0);
        for (std::size_t y = 0; y < chain.n(); ++y) {
            total += chain.prob(x, y);
            if (y != x && chain.prob(x, y) > 0) {
                CHECK(chain.prob(x, y) == make_ratio(1, 8));
                ++neighbors;
            }
        }
        CHECK(neighbors == 4);
        CHECK(total == 1);
    }
    SUBCASE("stationary distribution is uniform") {
        auto chain = lazy_torus_kernel<Rat>(5, 1);
        for (const Rat& v : stationary(chain)) CHECK(v == make_ratio(1, 5));
    }
    SUBCASE("state budget guard") {
        CHECK_THROWS_AS(lazy_torus_kernel<Rat>(100, 3), StateLimitExceeded);
    }
}

TEST_CASE("torus geometry") {
    TorusGeom geom(5, 2);
    CHECK(geom.states() == 25);
    CHECK(geom.point(geom.index({3, 4})) == std::vector<int>{3, 4});
    CHECK(geom.dist(geom.index({0, 0}), geom.index({4, 3})) == 3);
    CHECK(geom.antipode() == geom.index({2, 2}));
}

TEST_CASE("cycle reflection on Z_9 matches the worked case") {
    // sigma(x) = (10 - x) mod 9 with H+ = {6,7,8,0}, H- = {1,2,3,4}, H0 = {5}.
    Reflection sigma = cycle_reflection(9, 10, false);
    sigma.validate(TorusGeom(9, 1));
    CHECK(sigma.apply(0) == 1);
    CHECK(sigma.apply(6) == 4);
    for (std::size_t x : {6, 7, 8, 0}) CHECK(sigma.part(x) == Reflection::Part::Plus);
    for (std::size_t x : {1, 2, 3, 4}) CHECK(sigma.part(x) == Reflection::Part::Minus);
    CHECK(sigma.part(5) == Reflection::Part::Zero);
}

TEST_CASE("polarize_set") {
    Reflection sigma = cycle_reflection(9, 10, false);
    SUBCASE("worked examples") {
        StateSet zero = StateSet::singleton(9, 0);
        CHECK(polarize_set(zero, sigma) == zero);
        StateSet no6 = StateSet::full(9);
        no6.remove(6);
        StateSet no4 = StateSet::full(9);
        no4.remove(4);
        CHECK(polarize_set(no6, sigma) == no4);
    }
    SUBCASE("symmetric sets are fixed") {
        StateSet sym = StateSet::of(9, {0, 1, 5});  // 0 <-> 1 swapped pair plus the fixed point
        CHECK(polarize_set(sym, sigma) == sym);
    }
    SUBCASE("polarization preserves cardinality on random sets") {
        std::mt19937_64 rng = substream(3, 0);
        std::uniform_int_distribution<int> n_pick(3, 9);
        std::uniform_int_distribution<unsigned long> mask(0, ~0UL);
        std::uniform_int_distribution<int> coin(0, 1);
        for (int trial = 0; trial < 1000; ++trial) {
            int n = n_pick(rng);
            std::uniform_int_distribution<int> c_pick(0, 2 * n - 1);
            Reflection s = cycle_reflection(n, c_pick(rng), coin(rng) == 1);
            StateSet a = StateSet::from_mask(static_cast<std::size_t>(n),
                                             mask(rng) & ((1UL << n) - 1));
            CHECK(polarize_set(a, s).size() == a.size());
        }
    }
}

TEST_CASE("reflection validation catches broken partitions") {
    // Swap the parts so sigma(H+) lands in H+ for some point.
    std::vector<std::size_t> map(5);
    for (std::size_t x = 0; x < 5; ++x) map[x] = (5 - x) % 5;
    std::vector<Reflection::Part> part(5, Reflection::Part::Plus);
    part[0] = Reflection::Part::Zero;
    Reflection broken(std::move(map), std::move(part));
    CHECK_THROWS_AS(broken.validate(TorusGeom(5, 1)), InvalidCase);
}

TEST_CASE("two_point_J") {
    SUBCASE("all ones gives 2^n") {
        TwoPointInstance inst;
        inst.n_funcs = 3;
        inst.a = Matrix<Rat>(3, 3);
        inst.b = Matrix<Rat>(3, 3);
        for (std::size_t i = 0; i < 3; ++i) {
            inst.phi.push_back({Rat(1), Rat(1)});
            for (std::size_t j = 0; j < 3; ++j) inst.a(i, j) = 1;
        }
        CHECK(two_point_J(inst) == 8);
    }
    SUBCASE("already-sorted instances are fixed by polarization") {
        std::mt19937_64 rng = substream(4, 0);
        for (int trial = 0; trial < 100; ++trial) {
            TwoPointInstance inst = random_instance(4, rng);
            for (auto& p : inst.phi)
                if (p[1] > p[0]) std::swap(p[0], p[1]);
            CHECK(two_point_J(inst) == two_point_J(polarize_instance(inst)));
        }
    }
    SUBCASE("rearrangement never decreases J on random instances") {
        std::mt19937_64 rng = substream(5, 0);
        for (int trial = 0; trial < 2000; ++trial) {
            TwoPointInstance inst = random_instance(5, rng);
            CHECK(two_point_J(inst) <= two_point_J(polarize_instance(inst)));
        }
    }
}

TEST_CASE("check_survival_monotone") {
    SUBCASE("full-torus targets give probability 1 on both sides") {
        Reflection sigma = cycle_reflection(5, 3, false);
        std::vector<StateSet> targets(3, StateSet::full(5));
        MonotoneCheck check = check_survival_monotone(5, 1, 2, targets, sigma);
        CHECK(check.lhs == 1);
        CHECK(check.rhs == 1);
        CHECK(check.pass);
    }
    SUBCASE("random singleton-complement targets on the cycle") {
        std::mt19937_64 rng = substream(6, 0);
        TorusGeom geom(5, 1);
        std::uniform_int_distribution<std::size_t> pick(0, 4);
        std::uniform_int_distribution<int> c_pick(0, 9);
        std::uniform_int_distribution<int> coin(0, 1);
        for (int trial = 0; trial < 100; ++trial) {
            Reflection sigma = cycle_reflection(5, c_pick(rng), coin(rng) == 1);
            std::vector<StateSet> targets;
            for (int s = 0; s < 3; ++s) {
                StateSet keep = StateSet::full(5);
                keep.remove(pick(rng));
                targets.push_back(keep);
            }
            MonotoneCheck check = check_survival_monotone(5, 1, pick(rng), targets, sigma);
            CHECK(check.pass);
        }
    }
    SUBCASE("two-dimensional instances") {
        std::mt19937_64 rng = substream(6, 1);
        TorusGeom geom(3, 2);
        std::uniform_int_distribution<std::size_t> pick(0, geom.states() - 1);
        std::uniform_int_distribution<int> c_pick(0, 5);
        std::uniform_int_distribution<int> axis(0, 1);
        std::uniform_int_distribution<int> coin(0, 1);
        for (int trial = 0; trial < 30; ++trial) {
            Reflection sigma = coordinate_reflection(geom, axis(rng), c_pick(rng), coin(rng) == 1);
            std::vector<StateSet> targets;
            for (int s = 0; s < 2; ++s) {
                StateSet keep = StateSet::full(geom.states());
                keep.remove(pick(rng));
                targets.push_back(keep);
            }
            CHECK(check_survival_monotone(3, 2, pick(rng), targets, sigma).pass);
        }
    }
}

TEST_CASE("theorem2_bruteforce") {
    SUBCASE("Z_3 one step: maximum 3/4 with the antipode among maximizers") {
        Theorem2Result res = theorem2_bruteforce(3, 1, 1);
        CHECK(res.max_survival == make_ratio(3, 4));
        CHECK(res.antipode_survival == make_ratio(3, 4));
        CHECK(res.pass);
        CHECK(res.antipode_is_max);
        CHECK(res.maximizers.size() == 2);  // f(1) in {1, 2}
    }
    SUBCASE("Z_4: constant antipode is maximal through t = 4") {
        for (int t = 1; t <= 4; ++t) {
            Theorem2Result res = theorem2_bruteforce(4, 1, t);
            CHECK(res.pass);
            CHECK(res.antipode_is_max);
        }
    }
    SUBCASE("non-lazy kernel on even cycles admits a survival-1 trajectory") {
        Theorem2Result res = theorem2_bruteforce(4, 1, 3, false);
        CHECK(res.max_survival == 1);
        CHECK(!res.pass);  // parity dodging beats the constant antipode
    }
    SUBCASE("search budget guard") {
        CHECK_THROWS_AS(theorem2_bruteforce(10, 2, 5, true, 1000), SearchSpaceExceeded);
    }
}

TEST_CASE("antipode_reflection succeeds for every cycle target up to n = 11") {
    for (int n = 3; n <= 11; ++n) {
        const int a = n / 2;
        for (int target = 0; target < n; ++target) {
            Reflection sigma = antipode_reflection(n, target, a);
            StateSet hole_t = StateSet::full(static_cast<std::size_t>(n));
            hole_t.remove(static_cast<std::size_t>(target));
            StateSet hole_a = StateSet::full(static_cast<std::size_t>(n));
            hole_a.remove(static_cast<std::size_t>(a));
            StateSet zero = StateSet::singleton(static_cast<std::size_t>(n), 0);
            CHECK(polarize_set(hole_t, sigma) == hole_a);
            CHECK(polarize_set(zero, sigma) == zero);
            CHECK(polarize_set(hole_a, sigma) == hole_a);
        }
    }
}

TEST_CASE("antipode_reflection reproduces the worked Z_9 instance") {
    Reflection sigma = antipode_reflection(9, 6, 4);
    CHECK(sigma.apply(0) == 1);
    CHECK(sigma.apply(6) == 4);
    CHECK(sigma.part(6) == Reflection::Part::Plus);
    CHECK(sigma.part(5) == Reflection::Part::Zero);
}

TEST_CASE("moving-target search on the lazy cycle never beats the static maximum") {
    for (int n : {4, 5, 6}) {
        auto chain = lazy_cycle<Rat>(static_cast<std::size_t>(n));
        for (long num : {1L, 2L}) {
            Rat alpha = make_ratio(num, n);
            auto best_static = t_H(chain, alpha, SetFamily::Intervals);
            auto res = t_mov_lower_bound(chain, alpha, 3, SetFamily::Intervals);
            CHECK(res.value == best_static.value);
        }
    }
}
