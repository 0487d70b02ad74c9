#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "matchkit/baselines.hpp"
#include "matchkit/offline.hpp"
#include "test_util.hpp"

using namespace matchkit;
using namespace matchkit::testutil;

TEST_CASE("balance on the upper-triangular instance approaches 1-1/e") {
    GraphInstance g = gen_ut(200);
    double opt = opt_matching(g).value;
    CHECK(opt == doctest::Approx(200.0));
    double ratio = balance_run(g).value / opt;
    CHECK(ratio >= 0.628);
    CHECK(ratio <= 0.64);
}

TEST_CASE("balance saturates a single edge") {
    GraphInstance g = parse_instance(
        "MATCHKIT v1\noffline 1 unweighted\narrival 0: 0\n");
    RunResult res = balance_run(g);
    CHECK(res.allocation.x[0][0] == doctest::Approx(1.0));
}

TEST_CASE("greedy takes the heavier vertex and can lose to OPT") {
    GraphInstance g = parse_instance(
        "MATCHKIT v1\noffline 2 weighted\nweights 3 1\n"
        "arrival 0: 0 1\narrival 1: 0\n");
    RunResult res = greedy_run(g);
    CHECK(res.allocation.x[0][0] == doctest::Approx(1.0));
    CHECK(res.allocation.x[0][1] == doctest::Approx(0.0));
    CHECK(res.value == doctest::Approx(3.0));
    CHECK(brute_force_opt(g) == doctest::Approx(4.0));
}

TEST_CASE("maximal policies achieve at least half of OPT") {
    Rng rng(17);
    for (int rep = 0; rep < 200; ++rep) {
        GraphInstance g = random_instance(rng, 7, 9, 0.35, rep % 2 == 0);
        double opt = brute_force_opt(g);
        CHECK(greedy_run(g).value >= 0.5 * opt - 1e-9);
        if (!g.weighted) {
            attach_integral_advice(g, rng);
            CHECK(advice_waterfill_run(g).value >= 0.5 * opt - 1e-9);
        }
    }
}

TEST_CASE("follow-advice reproduces exactly the advice") {
    Rng rng(23);
    for (int rep = 0; rep < 50; ++rep) {
        GraphInstance g = random_instance(rng, 6, 8, 0.5, false);
        attach_fractional_advice(g, rng);
        RunResult res = follow_advice_run(g);
        CHECK(res.value == doctest::Approx(g.advice_value()).epsilon(1e-12));
        for (size_t t = 0; t < g.arrivals.size(); ++t) {
            const auto& ev = g.arrivals[t];
            for (size_t i = 0; i < ev.neighborhood.size(); ++i) {
                double expect = 0.0;
                for (const auto& [u, val] : ev.advice)
                    if (u == ev.neighborhood[i]) expect = val;
                CHECK(res.allocation.x[t][i] == doctest::Approx(expect));
            }
        }
    }
}

TEST_CASE("coin-flip is the exact convex combination per edge") {
    Rng rng(29);
    for (int rep = 0; rep < 50; ++rep) {
        GraphInstance g = random_instance(rng, 6, 8, 0.5, rep % 2 == 0);
        attach_fractional_advice(g, rng);
        RunResult bal = balance_run(g);
        RunResult adv = follow_advice_run(g);
        for (double mix : {0.0, 0.5, 1.0}) {
            RunResult cf = coinflip_run(g, mix);
            CHECK(validate_fractional_matching(g, cf.allocation).ok);
            for (size_t t = 0; t < g.arrivals.size(); ++t)
                for (size_t i = 0; i < cf.allocation.x[t].size(); ++i)
                    CHECK(cf.allocation.x[t][i] ==
                          doctest::Approx((1.0 - mix) * bal.allocation.x[t][i] +
                                          mix * adv.allocation.x[t][i])
                              .epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(CoinflipPolicy({1.0}, 1.5), RunError);
}

TEST_CASE("advice-fill follows feasible advice fully") {
    Rng rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        GraphInstance g = random_instance(rng, 7, 7, 0.5, false);
        attach_integral_advice(g, rng);
        RunResult res = advice_waterfill_run(g);
        CHECK(validate_fractional_matching(g, res.allocation).ok);
        CHECK(res.value >= g.advice_value() - 1e-9);
        // Every advised vertex ends at least as full as its advice (earlier
        // waterfill mass only helps).
        for (size_t t = 0; t < g.arrivals.size(); ++t)
            for (const auto& [u, val] : g.arrivals[t].advice)
                CHECK(res.allocation.levels[u] >= val - 1e-9);
    }
}

TEST_CASE("make_policy dispatches every algorithm name") {
    std::vector<double> w = {1.0, 1.0};
    for (const char* name :
         {"lab", "paw", "balance", "greedy", "advice", "coinflip",
          "advicefill"}) {
        auto pol = make_policy(name, w, 0.5, 0.5);
        std::vector<double> x = pol->step({0, 1}, {});
        CHECK(x.size() == 2);
    }
    CHECK_THROWS_AS(make_policy("nope", w, 0.5), RunError);
}

TEST_CASE("all baseline allocations are feasible") {
    Rng rng(37);
    for (int rep = 0; rep < 40; ++rep) {
        GraphInstance g = random_instance(rng, 8, 10, 0.4, rep % 2 == 0);
        attach_fractional_advice(g, rng);
        CHECK(validate_fractional_matching(g, balance_run(g).allocation).ok);
        CHECK(validate_fractional_matching(g, greedy_run(g).allocation).ok);
        CHECK(validate_fractional_matching(g, follow_advice_run(g).allocation)
                  .ok);
    }
}
