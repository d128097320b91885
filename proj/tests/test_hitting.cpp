#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mchain/generators.hpp"
#include "mchain/hitting.hpp"
#include "mchain/mc.hpp"

using namespace mchain;

TEST_CASE("StateSet basics") {
    StateSet s = StateSet::of(6, {1, 4});
    CHECK(s.size() == 2);
    CHECK(s.contains(1));
    CHECK(!s.contains(0));
    CHECK(s.complement().size() == 4);
    CHECK(StateSet::interval(6, 4, 3) == StateSet::of(6, {4, 5, 0}));
    CHECK(StateSet::from_mask(4, 0b1010UL) == StateSet::of(4, {1, 3}));
    CHECK(StateSet::full(3).members() == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("static_hitting") {
    SUBCASE("gambler's ruin on the cycle: E_0[tau_k] = k(n-k)") {
        for (std::size_t n : {5, 8, 11}) {
            auto chain = simple_cycle<Rat>(n);
            for (std::size_t k = 1; k < n; ++k) {
                auto h = static_hitting(chain, StateSet::singleton(n, k));
                CHECK(h[0] == Rat(static_cast<long>(k * (n - k))));
            }
        }
    }
    SUBCASE("zero on the target") {
        auto chain = simple_cycle<Rat>(5);
        auto h = static_hitting(chain, StateSet::of(5, {2, 3}));
        CHECK(h[2] == 0);
        CHECK(h[3] == 0);
        CHECK(h[0] > 0);
    }
    SUBCASE("lazy chain hitting times are exactly twice the non-lazy ones") {
        std::mt19937_64 rng = substream(7, 0);
        for (int trial = 0; trial < 10; ++trial) {
            MarkovChain<Rat> chain = random_chain(4 + trial % 3, rng);
            MarkovChain<Rat> lazy = lazify(chain);
            std::uniform_int_distribution<std::size_t> pick(0, chain.n() - 1);
            StateSet target = StateSet::singleton(chain.n(), pick(rng));
            auto h = static_hitting(chain, target);
            auto hl = static_hitting(lazy, target);
            for (std::size_t x = 0; x < chain.n(); ++x) CHECK(hl[x] == Rat(2) * h[x]);
        }
    }
    SUBCASE("empty target rejected") {
        CHECK_THROWS_AS(static_hitting(simple_cycle<Rat>(4), StateSet(4)), InvalidParams);
    }
}

TEST_CASE("survival_step") {
    auto chain = lazy_cycle<Rat>(3);
    SurvivalVector<Rat> v{std::vector<Rat>{Rat(1), Rat(0), Rat(0)}, 0};
    SUBCASE("masking by everything annihilates") {
        auto out = survival_step(chain, v, StateSet::full(3));
        CHECK(out.total() == 0);
        CHECK(out.time == 1);
    }
    SUBCASE("masking by nothing conserves mass") {
        auto out = survival_step(chain, v, StateSet(3));
        CHECK(out.total() == 1);
    }
    SUBCASE("one-step kernel arithmetic") {
        auto out = survival_step(chain, v, StateSet::singleton(3, 1));
        CHECK(out.masses[0] == make_ratio(1, 2));
        CHECK(out.masses[1] == 0);
        CHECK(out.masses[2] == make_ratio(1, 4));
    }
    SUBCASE("total mass is non-increasing along any sequence") {
        std::mt19937_64 rng = substream(9, 1);
        std::uniform_int_distribution<std::size_t> pick(0, 2);
        SurvivalVector<Rat> cur = initial_survival(chain, 0, StateSet::singleton(3, 2));
        Rat prev = cur.total();
        for (int t = 0; t < 10; ++t) {
            cur = survival_step(chain, cur, StateSet::singleton(3, pick(rng)));
            CHECK(cur.total() <= prev);
            prev = cur.total();
        }
    }
}

TEST_CASE("moving_hitting") {
    auto chain = simple_cycle<Rat>(8);
    SUBCASE("constant sequence equals static value") {
        StateSet a = StateSet::of(8, {3});
        CHECK(moving_hitting(chain, 0, SetSequence::constant(a)) ==
              static_hitting(chain, a)[0]);
    }
    SUBCASE("start inside the first set gives zero") {
        SetSequence seq({StateSet::of(8, {0, 1})}, StateSet::singleton(8, 5));
        CHECK(moving_hitting(chain, 0, seq) == 0);
    }
    SUBCASE("unreachable prefix points reduce to the static value") {
        // From 0 the walk cannot reach 3 before time 2 nor 4 before time 4,
        // so the prefix never fires and collisions with the tail cannot
        // happen before the tail takes over.
        SetSequence seq({StateSet::singleton(8, 3), StateSet::singleton(8, 3)},
                        StateSet::singleton(8, 4));
        CHECK(moving_hitting(chain, 0, seq) == static_hitting(chain, StateSet::singleton(8, 4))[0]);
    }
    SUBCASE("matches Monte Carlo within 3 standard errors") {
        auto fchain = to_float(chain);
        SetSequence seq({StateSet::of(8, {2}), StateSet::of(8, {3})}, StateSet::of(8, {6, 7}));
        double exact = moving_hitting(fchain, 1, seq);
        McEstimate mc = mc_moving_hitting(fchain, 1, seq, 100000, 12345);
        CHECK(std::fabs(mc.mean - exact) <= 3.0 * mc.std_error);
    }
}

TEST_CASE("SetSequence validation and alpha-family membership") {
    CHECK_THROWS_AS(SetSequence({}, StateSet(4)), InvalidParams);
    CHECK_THROWS_AS(SetSequence({StateSet(4)}, StateSet::singleton(4, 0)), InvalidParams);
    auto chain = lazy_cycle<Rat>(4);
    auto pi = stationary(chain);
    SetSequence seq({StateSet::of(4, {0, 1})}, StateSet::of(4, {2}));
    CHECK(seq.in_alpha_family(pi, make_ratio(1, 4)));
    CHECK(!seq.in_alpha_family(pi, make_ratio(1, 2)));
}

TEST_CASE("qualifying set enumeration") {
    auto chain = lazy_cycle<Rat>(6);
    auto pi = stationary(chain);  // uniform 1/6
    SUBCASE("minimal sets under alpha = 1/3 are the 2-subsets") {
        auto sets = minimal_qualifying_sets(pi, make_ratio(1, 3), SetFamily::Minimal);
        CHECK(sets.size() == 15);
        for (const StateSet& s : sets) CHECK(s.size() == 2);
    }
    SUBCASE("interval family enumerates qualifying cyclic intervals") {
        auto sets = qualifying_sets(pi, make_ratio(1, 2), SetFamily::Intervals);
        for (const StateSet& s : sets) CHECK(s.size() >= 3);
        auto minimal = minimal_qualifying_sets(pi, make_ratio(1, 2), SetFamily::Intervals);
        CHECK(minimal.size() == 6);
        for (const StateSet& s : minimal) CHECK(s.size() == 3);
    }
    SUBCASE("subset enumeration is guarded") {
        Distribution<Rat> big(17, make_ratio(1, 17));
        CHECK_THROWS_AS(qualifying_sets(big, make_ratio(1, 17), SetFamily::All), StateLimitExceeded);
    }
}

TEST_CASE("t_H") {
    SUBCASE("lazy Z_8 antipodal point: 2 * 4 * 4 = 32") {
        auto chain = lazy_cycle<Rat>(8);
        auto best = t_H(chain, make_ratio(1, 8), SetFamily::Intervals);
        CHECK(best.value == 32);
        CHECK(best.argmax_set.size() == 1);
        // Argmax start sits antipodally from the argmax singleton.
        std::size_t target = best.argmax_set.members()[0];
        CHECK((best.argmax_state + 8 - target) % 8 == 4);
    }
    SUBCASE("alpha = 1 forces the full set and value 0") {
        auto chain = lazy_cycle<Rat>(5);
        CHECK(t_H(chain, Rat(1), SetFamily::Intervals).value == 0);
        CHECK(t_H(chain, Rat(1), SetFamily::All).value == 0);
    }
    SUBCASE("family=all and family=minimal agree on lazy Z_6, alpha = 1/3") {
        auto chain = lazy_cycle<Rat>(6);
        CHECK(t_H(chain, make_ratio(1, 3), SetFamily::All).value ==
              t_H(chain, make_ratio(1, 3), SetFamily::Minimal).value);
    }
    SUBCASE("alpha validation") {
        auto chain = lazy_cycle<Rat>(4);
        CHECK_THROWS_AS(t_H(chain, Rat(0), SetFamily::Intervals), InvalidParams);
        CHECK_THROWS_AS(t_H(chain, Rat(2), SetFamily::Intervals), InvalidParams);
    }
}

TEST_CASE("set family names round-trip") {
    for (SetFamily f : {SetFamily::All, SetFamily::Minimal, SetFamily::Intervals,
                        SetFamily::SingletonComplements})
        CHECK(parse_set_family(to_string(f)) == f);
    CHECK(!parse_set_family("bogus"));
}

TEST_CASE("mc_moving_hitting is deterministic under a fixed seed") {
    auto chain = to_float(lazy_cycle<Rat>(5));
    SetSequence seq = SetSequence::constant(StateSet::singleton(5, 2));
    McEstimate a = mc_moving_hitting(chain, 0, seq, 2000, 99);
    McEstimate b = mc_moving_hitting(chain, 0, seq, 2000, 99);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
}
