#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "matchkit/offline.hpp"
#include "test_util.hpp"

using namespace matchkit;
using namespace matchkit::testutil;

TEST_CASE("rng streams are deterministic and in range") {
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i) {
        double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    Rng c(1);
    for (int i = 0; i < 1000; ++i) CHECK(c.below(7) < 7);
    // sample() returns k distinct elements.
    Rng d(2);
    std::vector<int> items = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    auto s = d.sample(items, 4);
    CHECK(s.size() == 4);
    CHECK(std::set<int>(s.begin(), s.end()).size() == 4);
}

TEST_CASE("opt_matching equals the exhaustive oracle") {
    Rng rng(61);
    for (int rep = 0; rep < 500; ++rep) {
        GraphInstance g = random_instance(rng, 1 + static_cast<int>(rng.below(7)),
                                          1 + static_cast<int>(rng.below(7)),
                                          0.2 + 0.6 * rng.uniform(),
                                          rep % 2 == 0);
        MatchingResult m = opt_matching(g);
        CHECK(m.value == doctest::Approx(brute_force_opt(g)).epsilon(1e-12));
        // The reported matching is a matching and attains the value.
        double v = 0.0;
        std::set<int> used_online;
        for (int u = 0; u < g.n_offline; ++u) {
            int t = m.offline_match[u];
            if (t < 0) continue;
            CHECK(used_online.insert(t).second);
            CHECK(g.arrivals[t].has_neighbor(u));
            CHECK(m.online_match[t] == u);
            v += g.weights[u];
        }
        CHECK(v == doctest::Approx(m.value));
    }
}

TEST_CASE("perturb_graph endpoints") {
    Rng rng(67);
    GraphInstance g = gen_er(40, 0.3, 7);
    // gamma = 0: identity on edges.
    GraphInstance same = perturb_graph(g, {0.0, 99});
    for (int t = 0; t < g.n_online(); ++t)
        CHECK(same.arrivals[t].neighborhood == g.arrivals[t].neighborhood);
    // gamma = 1: complete replacement by non-neighbors.
    GraphInstance flip = perturb_graph(g, {1.0, 99});
    for (int t = 0; t < g.n_online(); ++t) {
        std::set<OfflineId> orig(g.arrivals[t].neighborhood.begin(),
                                 g.arrivals[t].neighborhood.end());
        for (OfflineId u : flip.arrivals[t].neighborhood)
            CHECK(orig.count(u) == 0);
        // Degree preserved up to rounding: round(0) + round(codeg).
        CHECK(flip.arrivals[t].neighborhood.size() ==
              40 - g.arrivals[t].neighborhood.size());
    }
    // Intermediate gamma keeps about (1-gamma) of the true edges.
    GraphInstance mid = perturb_graph(g, {0.4, 99});
    long kept = 0, total = 0;
    for (int t = 0; t < g.n_online(); ++t) {
        std::set<OfflineId> orig(g.arrivals[t].neighborhood.begin(),
                                 g.arrivals[t].neighborhood.end());
        total += static_cast<long>(g.arrivals[t].neighborhood.size());
        for (OfflineId u : mid.arrivals[t].neighborhood)
            kept += orig.count(u);
    }
    CHECK(std::abs(static_cast<double>(kept) / total - 0.6) < 0.02);
    // Deterministic in the seed.
    GraphInstance mid2 = perturb_graph(g, {0.4, 99});
    CHECK(serialize_instance(mid2) == serialize_instance(mid));
}

TEST_CASE("generate_advice is always feasible and integral") {
    Rng rng(71);
    for (int rep = 0; rep < 100; ++rep) {
        GraphInstance g = random_instance(rng, 8, 8, 0.35, false);
        GraphInstance adv = generate_advice(
            g, {rng.uniform(), static_cast<std::uint64_t>(rep)});
        adv.validate(); // throws on any advice violation
        CHECK(adv.advice_integral());
        for (int t = 0; t < g.n_online(); ++t)
            CHECK(adv.arrivals[t].neighborhood == g.arrivals[t].neighborhood);
    }
}

TEST_CASE("noise-free advice on the triangular instance is optimal") {
    GraphInstance g = gen_ut(30);
    GraphInstance adv = generate_advice(g, {0.0, 5});
    CHECK(adv.advice_value() == doctest::Approx(opt_matching(g).value));
}

TEST_CASE("generators produce the documented shapes") {
    GraphInstance ut = gen_ut(3);
    CHECK(ut.n_offline == 3);
    CHECK(ut.arrivals[0].neighborhood == std::vector<OfflineId>{0, 1, 2});
    CHECK(ut.arrivals[1].neighborhood == std::vector<OfflineId>{1, 2});
    CHECK(ut.arrivals[2].neighborhood == std::vector<OfflineId>{2});

    CHECK(gen_er(20, 0.0, 1).arrivals[7].neighborhood.empty());
    GraphInstance full = gen_er(20, 1.0, 1);
    CHECK(full.arrivals[7].neighborhood.size() == 20);

    // Edge count within 4 standard deviations of n^2 p.
    GraphInstance er = gen_er(100, 0.2, 3);
    long edges = 0;
    for (const auto& ev : er.arrivals)
        edges += static_cast<long>(ev.neighborhood.size());
    double mean = 100.0 * 100.0 * 0.2;
    double sd = std::sqrt(100.0 * 100.0 * 0.2 * 0.8);
    CHECK(std::abs(edges - mean) < 4.0 * sd);
    // Seed determinism.
    CHECK(serialize_instance(gen_er(100, 0.2, 3)) == serialize_instance(er));

    GraphInstance w = gen_weights(gen_er(30, 0.3, 4), 9);
    CHECK(w.weighted);
    for (double wt : w.weights) {
        CHECK(wt >= 0.0);
        CHECK(wt <= 1000.0);
    }
    CHECK(serialize_instance(gen_weights(gen_er(30, 0.3, 4), 9)) ==
          serialize_instance(w));
}

TEST_CASE("ingest_real splits an edge list into a bipartite instance") {
    std::string edges =
        "# toy graph\n"
        "1 2\n"
        "2 3\n"
        "3 4\n"
        "4 1\n"
        "1 3\n";
    GraphInstance g = ingest_real(edges, 11);
    CHECK(g.n_offline == 2);
    CHECK(g.n_online() == 2);
    long cnt = 0;
    for (const auto& ev : g.arrivals) cnt += static_cast<long>(ev.neighborhood.size());
    CHECK(cnt >= 1); // at least one crossing edge in K4-minus-one-edge
    g.validate();
    CHECK(serialize_instance(ingest_real(edges, 11)) == serialize_instance(g));
    // 0-based lists are auto-detected.
    GraphInstance z = ingest_real("0 1\n1 2\n2 3\n", 3);
    CHECK(z.n_offline == 2);
    // Malformed lines report their number.
    CHECK_THROWS_WITH_AS(ingest_real("1 2\nbogus\n", 1),
                         doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_AS(ingest_real("1 2 3\n", 1), ParseError);
}
