#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "matchkit/baselines.hpp"
#include "matchkit/offline.hpp"
#include "matchkit/paw.hpp"
#include "test_util.hpp"

using namespace matchkit;
using namespace matchkit::testutil;

TEST_CASE("hand trace: push to lambda then waterfill the rest") {
    GraphInstance g = parse_instance(
        "MATCHKIT v1\noffline 2 unweighted\narrival 0: 0 1 | a: 0=1\n");
    RunResult res = paw_run(g, 0.6);
    CHECK(res.allocation.x[0][0] == doctest::Approx(0.6));
    CHECK(res.allocation.x[0][1] == doctest::Approx(0.4));
    CHECK(res.value == doctest::Approx(1.0));
}

TEST_CASE("phase 1 tops up only to lambda across repeated advice") {
    GraphInstance g;
    g.n_offline = 3;
    g.weights = {1.0, 1.0, 1.0};
    g.arrivals.resize(2);
    g.arrivals[0].neighborhood = {0, 1, 2};
    g.arrivals[0].advice = {{0, 1.0}};
    g.arrivals[1].neighborhood = {0, 1, 2};
    PawPolicy pol(3, 0.5);
    std::vector<double> x0 =
        pol.step(g.arrivals[0].neighborhood, g.arrivals[0].advice);
    // tau = 0.5 to vertex 0, then 0.5 waterfilled over {0,1,2}: the two empty
    // vertices rise to 0.25 each.
    CHECK(x0[0] == doctest::Approx(0.5));
    CHECK(x0[1] == doctest::Approx(0.25));
    CHECK(x0[2] == doctest::Approx(0.25));
    // Advising vertex 0 again adds no phase-1 mass (d[0] already at lambda);
    // the whole unit is waterfilled, levelling all three at 2/3.
    std::vector<double> x1 =
        pol.step(g.arrivals[1].neighborhood, {{0, 1.0}});
    CHECK(x1[0] == doctest::Approx(1.0 / 6.0));
    CHECK(x1[1] == doctest::Approx(2.0 / 3.0 - 0.25));
    CHECK(pol.d[0] == doctest::Approx(2.0 / 3.0));
    CHECK(pol.d[1] == doctest::Approx(2.0 / 3.0));
    CHECK(pol.d[2] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("lambda=0 PAW is plain waterfilling") {
    Rng rng(41);
    for (int rep = 0; rep < 30; ++rep) {
        GraphInstance g = random_instance(rng, 6, 8, 0.5, false);
        attach_integral_advice(g, rng);
        RunResult paw = paw_run(g, 0.0);
        GraphInstance g2 = g;
        for (auto& ev : g2.arrivals) ev.advice.clear();
        // With lambda=0 phase 1 is idle, so the run equals the advice-free
        // waterfill at any lambda.
        RunResult noadv = paw_run(g2, 0.7);
        for (size_t t = 0; t < g.arrivals.size(); ++t)
            for (size_t i = 0; i < paw.allocation.x[t].size(); ++i)
                CHECK(std::abs(paw.allocation.x[t][i] -
                               noadv.allocation.x[t][i]) < 1e-12);
        CHECK(validate_fractional_matching(g, paw.allocation).ok);
    }
}

TEST_CASE("rejects weighted instances and fractional advice") {
    GraphInstance g = parse_instance(
        "MATCHKIT v1\noffline 1 weighted\nweights 2\narrival 0: 0\n");
    CHECK_THROWS_AS(paw_run(g, 0.5), RunError);
    GraphInstance h = parse_instance(
        "MATCHKIT v1\noffline 1 unweighted\narrival 0: 0 | a: 0=0.5\n");
    CHECK_THROWS_AS(paw_run(h, 0.5), RunError);
}

TEST_CASE("both dual certificates pass on random instances") {
    Rng rng(43);
    for (double lambda : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        for (int rep = 0; rep < 40; ++rep) {
            GraphInstance g = random_instance(rng, 8, 10, 0.4, false);
            attach_integral_advice(g, rng);
            RunResult res = paw_run(g, lambda);
            PawCertReport cr = paw_certify(res, g, lambda);
            CHECK(cr.pass_gap);
            CHECK(cr.pass_robust);
            CHECK(cr.pass_consistent);
        }
    }
}

TEST_CASE("value meets the robustness guarantee against OPT") {
    Rng rng(47);
    for (double lambda : {0.1, 0.5, 0.9}) {
        for (int rep = 0; rep < 25; ++rep) {
            GraphInstance g = random_instance(rng, 7, 9, 0.4, false);
            attach_integral_advice(g, rng);
            double opt = brute_force_opt(g);
            RunResult res = paw_run(g, lambda);
            CHECK(res.value >= r_paw(lambda) * opt - 1e-6);
        }
    }
}

TEST_CASE("consistency against the advice value") {
    Rng rng(53);
    for (int rep = 0; rep < 25; ++rep) {
        GraphInstance g = random_instance(rng, 7, 9, 0.5, false);
        attach_integral_advice(g, rng);
        double adv = g.advice_value();
        RunResult res = paw_run(g, 0.8);
        CHECK(res.value >= c_paw(0.8) * adv - 1e-6);
    }
}

TEST_CASE("allocations are always feasible") {
    Rng rng(59);
    for (int rep = 0; rep < 60; ++rep) {
        GraphInstance g = random_instance(rng, 9, 12, 0.35, false);
        attach_integral_advice(g, rng);
        RunResult res = paw_run(g, rng.uniform());
        CHECK(validate_fractional_matching(g, res.allocation).ok);
    }
}
