#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include "matchkit/adversary.hpp"
#include "matchkit/baselines.hpp"
#include "matchkit/lab.hpp"
#include "matchkit/numerics.hpp"
#include "matchkit/offline.hpp"
#include "matchkit/paw.hpp"

using namespace matchkit;

namespace {
std::vector<double> ones(int n) { return std::vector<double>(n, 1.0); }
} // namespace

TEST_CASE("n=1 Balance against both adversaries by hand") {
    {
        BalancePolicy pol(ones(2));
        AdversaryTranscript t = run_adversary_R(pol, 1);
        CHECK(t.feasible);
        CHECK(t.opt == 2.0);
        CHECK(t.alg_value == doctest::Approx(1.5));
        CHECK(t.ratio == doctest::Approx(0.75));
    }
    {
        BalancePolicy pol(ones(2));
        AdversaryTranscript t = run_adversary_C(pol, 1);
        CHECK(t.feasible);
        CHECK(t.alg_value == doctest::Approx(1.5));
    }
}

TEST_CASE("follow-advice ratios are exact") {
    for (int n : {1, 5, 40}) {
        FollowAdvicePolicy pr(2 * n);
        CHECK(run_adversary_R(pr, n).ratio == 0.5);
        FollowAdvicePolicy pc(2 * n);
        CHECK(run_adversary_C(pc, n).ratio == 1.0);
    }
}

TEST_CASE("the common phase is identical for R and C") {
    // Both adversaries replay the same first n arrivals against identical
    // algorithm state, so the realized instances agree on that prefix.
    const int n = 12;
    BalancePolicy pa(ones(2 * n)), pb(ones(2 * n));
    AdversaryTranscript tr = run_adversary_R(pa, n);
    AdversaryTranscript tc = run_adversary_C(pb, n);
    REQUIRE(tr.instance.arrivals.size() == 2 * static_cast<size_t>(n));
    REQUIRE(tc.instance.arrivals.size() == 2 * static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) {
        CHECK(tr.instance.arrivals[t].neighborhood ==
              tc.instance.arrivals[t].neighborhood);
        CHECK(tr.instance.arrivals[t].advice == tc.instance.arrivals[t].advice);
    }
}

TEST_CASE("hindsight instances admit a perfect matching") {
    for (int n : {1, 3, 8}) {
        LabPolicy pol(ones(2 * n), 0.4);
        AdversaryTranscript t = run_adversary_R(pol, n);
        CHECK(opt_matching(t.instance).value == doctest::Approx(2.0 * n));
        PawPolicy pol2(2 * n, 0.4);
        AdversaryTranscript t2 = run_adversary_C(pol2, n);
        CHECK(opt_matching(t2.instance).value == doctest::Approx(2.0 * n));
    }
}

TEST_CASE("transcript levels and value are consistent") {
    const int n = 10;
    LabPolicy pol(ones(2 * n), 0.3);
    AdversaryTranscript t = run_adversary_R(pol, n);
    CHECK(t.feasible);
    double sum = 0.0;
    for (double v : t.final_levels) sum += v;
    CHECK(sum == doctest::Approx(t.alg_value));
    for (double v : t.final_levels) {
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-9);
    }
}

TEST_CASE("LAB and PAW meet their guarantees under attack") {
    const int n = 100;
    for (double lambda : {0.0, 0.3, 0.7, 1.0}) {
        LabPolicy lr(ones(2 * n), lambda);
        CHECK(run_adversary_R(lr, n).ratio >= r_lab(lambda) - 2e-3);
        LabPolicy lc(ones(2 * n), lambda);
        CHECK(run_adversary_C(lc, n).ratio >= c_lab(lambda) - 2e-3);
        PawPolicy pr(2 * n, lambda);
        CHECK(run_adversary_R(pr, n).ratio >= r_paw(lambda) - 2e-3);
        PawPolicy pc(2 * n, lambda);
        CHECK(run_adversary_C(pc, n).ratio >= c_paw(lambda) - 2e-3);
    }
}

TEST_CASE("Balance degrades to 1-1/e under the robustness adversary") {
    const int n = 200;
    BalancePolicy pol(ones(2 * n));
    double ratio = run_adversary_R(pol, n).ratio;
    CHECK(std::abs(ratio - (1.0 - std::exp(-1.0))) < 0.02);
}

TEST_CASE("empirical_tradeoff runs the grid deterministically") {
    auto factory = [](double lambda) -> std::unique_ptr<OnlinePolicy> {
        return std::make_unique<LabPolicy>(ones(40), lambda);
    };
    std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    auto pts = empirical_tradeoff(factory, 20, grid);
    auto pts2 = empirical_tradeoff(factory, 20, grid);
    REQUIRE(pts.size() == grid.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i].lambda == grid[i]);
        CHECK(pts[i].r_hat == pts2[i].r_hat);
        CHECK(pts[i].c_hat == pts2[i].c_hat);
        CHECK(pts[i].r_hat >= r_lab(grid[i]) - 5e-3);
        CHECK(pts[i].c_hat >= c_lab(grid[i]) - 5e-3);
        CHECK(pts[i].c_hat <= 1.0 + 1e-12);
    }
}
