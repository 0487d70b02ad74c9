#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "matchkit/adwords.hpp"
#include "matchkit/lab.hpp"
#include "matchkit/offline.hpp"
#include "test_util.hpp"

using namespace matchkit;
using namespace matchkit::testutil;

namespace {

// Random small-bids instance: bids at most max_bid_frac of the budget.
AdwordsInstance random_adwords(Rng& rng, int n_adv, int n_imp,
                               double max_bid_frac, bool with_advice) {
    AdwordsInstance inst;
    inst.budgets.resize(n_adv);
    for (double& b : inst.budgets) b = 10.0 + 90.0 * rng.uniform();
    std::vector<double> adv_cap(n_adv, 1.0);
    inst.arrivals.resize(n_imp);
    for (auto& ev : inst.arrivals) {
        for (int u = 0; u < n_adv; ++u) {
            if (rng.uniform() < 0.5) continue;
            ev.advertisers.push_back(u);
            ev.bids.push_back((0.1 + 0.9 * rng.uniform()) * max_bid_frac *
                              inst.budgets[u]);
        }
        if (with_advice && !ev.advertisers.empty() && rng.uniform() < 0.5) {
            size_t i = static_cast<size_t>(rng.below(ev.advertisers.size()));
            OfflineId u = ev.advertisers[i];
            double room = adv_cap[u] * inst.budgets[u] / ev.bids[i];
            double a = std::min({rng.uniform(), 1.0, room});
            if (a > 1e-9) {
                ev.advice.emplace_back(u, a);
                adv_cap[u] -= a * ev.bids[i] / inst.budgets[u];
            }
        }
    }
    inst.validate();
    return inst;
}

} // namespace

TEST_CASE("parse and serialize round-trip") {
    std::string text =
        "MATCHKIT v1\n"
        "offline 2 adwords\n"
        "budgets 10 5\n"
        "arrival 0: b: 0=1.5 1=0.5 | a: 0=0.25\n"
        "arrival 1: b: 1=2\n";
    AdwordsInstance inst = parse_adwords(text);
    CHECK(inst.n_advertisers() == 2);
    CHECK(inst.arrivals[0].bid_of(0) == 1.5);
    CHECK(inst.arrivals[0].bid_of(1) == 0.5);
    CHECK(inst.epsilon_hat() == doctest::Approx(0.4));
    CHECK(inst.advice_value() == doctest::Approx(1.5 * 0.25));
    CHECK(serialize_adwords(inst) == text);
    CHECK(serialize_adwords(parse_adwords(serialize_adwords(inst))) == text);
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(parse_adwords("MATCHKIT v1\noffline 1 adwords\n"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_adwords("MATCHKIT v1\noffline 1 adwords\nbudgets -3\n"),
        ParseError);
    CHECK_THROWS_AS(
        parse_adwords("MATCHKIT v1\noffline 1 adwords\nbudgets 1\n"
                      "arrival 0: a: 0=1\n"),
        ParseError);
    // Cumulative advised spend above the budget.
    CHECK_THROWS_AS(
        parse_adwords("MATCHKIT v1\noffline 1 adwords\nbudgets 1\n"
                      "arrival 0: b: 0=0.6 | a: 0=1\n"
                      "arrival 1: b: 0=0.6 | a: 0=1\n"),
        ParseError);
}

TEST_CASE("reduces to LAB when bids equal budgets") {
    // With b_{u,v} = B_u = w_u the budget fraction dynamics coincide with
    // LAB's matching levels, so revenue equals the LAB objective.
    Rng rng(73);
    for (int rep = 0; rep < 40; ++rep) {
        GraphInstance g = random_instance(rng, 6, 8, 0.5, true);
        attach_fractional_advice(g, rng);
        double lambda = rng.uniform();
        AdwordsInstance inst;
        inst.budgets = g.weights;
        inst.arrivals.resize(g.arrivals.size());
        for (size_t t = 0; t < g.arrivals.size(); ++t) {
            for (OfflineId u : g.arrivals[t].neighborhood) {
                inst.arrivals[t].advertisers.push_back(u);
                inst.arrivals[t].bids.push_back(g.weights[u]);
            }
            inst.arrivals[t].advice = g.arrivals[t].advice;
        }
        AdwordsFracResult aw = adwords_frac_run(inst, lambda);
        RunResult lab = lab_run(g, lambda);
        CHECK(std::abs(aw.revenue - lab.value) < 1e-9);
        for (size_t t = 0; t < aw.x.size(); ++t)
            for (size_t i = 0; i < aw.x[t].size(); ++i)
                CHECK(std::abs(aw.x[t][i] - lab.allocation.x[t][i]) < 1e-9);
    }
}

TEST_CASE("fractional run respects budgets and certifies") {
    Rng rng(79);
    for (double lambda : {0.0, 0.3, 0.7, 1.0}) {
        for (int rep = 0; rep < 25; ++rep) {
            AdwordsInstance inst = random_adwords(rng, 5, 40, 0.1, true);
            AdwordsFracResult res = adwords_frac_run(inst, lambda);
            for (int u = 0; u < inst.n_advertisers(); ++u)
                CHECK(res.spend[u] <= inst.budgets[u] + 1e-9);
            AdwordsCertReport rep2 = adwords_certify(res, inst, lambda);
            CHECK(rep2.pass_gap);
            CHECK(rep2.pass_robust);
            CHECK(rep2.pass_consistent);
        }
    }
}

TEST_CASE("epsilon0 and gamma") {
    double e0 = adwords_epsilon0();
    CHECK(std::abs(e0 - 0.39423) < 5e-5);
    auto gamma_of = [](double e) {
        return 1.0 - e - std::sqrt(e * std::log(1.0 / e));
    };
    CHECK(std::abs(gamma_of(e0)) < 1e-9);
    for (double e : {0.01, 0.1, 0.2})
        CHECK(adwords_gamma(e) == doctest::Approx(gamma_of(e)));
    CHECK_THROWS_AS(adwords_gamma(0.0), RunError);
    CHECK_THROWS_AS(adwords_gamma(0.4), RunError);
    CHECK_THROWS_AS(adwords_gamma(-0.1), RunError);
}

TEST_CASE("rounding is deterministic, budget-safe and near the bound") {
    Rng rng(83);
    AdwordsInstance inst = random_adwords(rng, 4, 300, 0.02, false);
    AdwordsFracResult frac = adwords_frac_run(inst, 0.0);
    const double eps = 0.02;
    CHECK(adwords_round(inst, frac.x, eps, 7) ==
          adwords_round(inst, frac.x, eps, 7));
    double total_budget = 0.0;
    for (double b : inst.budgets) total_budget += b;
    double mean = 0.0;
    const int N = 2000;
    for (int s = 0; s < N; ++s) {
        double rev = adwords_round(inst, frac.x, eps, s);
        CHECK(rev <= total_budget + 1e-9);
        mean += rev;
    }
    mean /= N;
    double bound = (1.0 - 3.0 * std::sqrt(eps * std::log(1.0 / eps))) *
                   frac.revenue;
    CHECK(mean >= bound);
    // Rounding refuses instances whose bids are too large for epsilon.
    AdwordsInstance big = random_adwords(rng, 4, 20, 0.5, false);
    AdwordsFracResult bigf = adwords_frac_run(big, 0.0);
    CHECK_THROWS_AS(adwords_round(big, bigf.x, 0.01, 1), RunError);
}
