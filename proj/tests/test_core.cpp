#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "matchkit/core.hpp"
#include "test_util.hpp"

using namespace matchkit;
using namespace matchkit::testutil;

TEST_CASE("parse and serialize round-trip") {
    std::string text =
        "MATCHKIT v1\n"
        "offline 3 weighted\n"
        "weights 1.5 2 0.25\n"
        "arrival 0: 0 2 | a: 0=0.5 2=0.25\n"
        "arrival 1: 1\n"
        "arrival 2: 0 1 2 | a: 1=1\n";
    GraphInstance g = parse_instance(text);
    CHECK(g.n_offline == 3);
    CHECK(g.weighted);
    CHECK(g.weights[2] == 0.25);
    CHECK(g.arrivals[0].neighborhood == std::vector<OfflineId>{0, 2});
    CHECK(g.arrivals[0].advice_sum() == doctest::Approx(0.75));
    CHECK(g.advice_value() == doctest::Approx(1.5 * 0.5 + 0.25 * 0.25 + 2.0));
    CHECK(serialize_instance(g) == text);
    // Round trip is the identity on the parsed structure.
    GraphInstance g2 = parse_instance(serialize_instance(g));
    CHECK(serialize_instance(g2) == text);
}

TEST_CASE("comments and blank lines are ignored") {
    std::string text =
        "# heading\nMATCHKIT v1\n\noffline 1 unweighted # trailing\n"
        "arrival 0: 0\n";
    GraphInstance g = parse_instance(text);
    CHECK(g.n_offline == 1);
    CHECK(g.n_online() == 1);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_instance("HELLO\n"),
                         doctest::Contains("line 1"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_instance("MATCHKIT v1\noffline 1 unweighted\narrival 1: 0\n"),
        doctest::Contains("line 3"), ParseError);
    // Advice key outside the neighborhood.
    CHECK_THROWS_AS(
        parse_instance(
            "MATCHKIT v1\noffline 2 unweighted\narrival 0: 0 | a: 1=1\n"),
        ParseError);
    // Advice sum above one on a single arrival.
    CHECK_THROWS_AS(
        parse_instance("MATCHKIT v1\noffline 2 unweighted\n"
                       "arrival 0: 0 1 | a: 0=0.7 1=0.7\n"),
        ParseError);
    // Cumulative offline advice above one.
    CHECK_THROWS_AS(
        parse_instance("MATCHKIT v1\noffline 1 unweighted\n"
                       "arrival 0: 0 | a: 0=0.7\narrival 1: 0 | a: 0=0.7\n"),
        ParseError);
    // Weighted instance requires a weights line.
    CHECK_THROWS_AS(
        parse_instance("MATCHKIT v1\noffline 1 weighted\narrival 0: 0\n"),
        ParseError);
}

TEST_CASE("advice integrality predicate") {
    GraphInstance g = parse_instance(
        "MATCHKIT v1\noffline 2 unweighted\narrival 0: 0 1 | a: 0=1\n");
    CHECK(g.advice_integral());
    g.arrivals[0].advice = {{0, 0.5}};
    CHECK(!g.advice_integral());
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, 0.0, 1e300}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("fractional matching validation") {
    GraphInstance g = parse_instance(
        "MATCHKIT v1\noffline 2 unweighted\narrival 0: 0 1\narrival 1: 0\n");
    Allocation a = Allocation::zeros(g);
    a.x[0] = {0.5, 0.5};
    a.x[1] = {0.5};
    CHECK(validate_fractional_matching(g, a).ok);
    a.x[1] = {0.7}; // offline vertex 0 now at 1.2
    auto rep = validate_fractional_matching(g, a);
    CHECK(!rep.ok);
    CHECK(rep.violations.size() == 1);
    a.x[1] = {-0.1};
    CHECK(!validate_fractional_matching(g, a).ok);
    a.x[0] = {0.8, 0.8}; // online degree 1.6
    a.x[1] = {0.0};
    CHECK(!validate_fractional_matching(g, a).ok);
}

TEST_CASE("random instances survive the round trip") {
    Rng rng(42);
    for (int rep = 0; rep < 50; ++rep) {
        GraphInstance g = random_instance(rng, 6, 6, 0.5, rep % 2 == 0);
        attach_fractional_advice(g, rng);
        g.validate();
        GraphInstance h = parse_instance(serialize_instance(g));
        CHECK(serialize_instance(h) == serialize_instance(g));
    }
}
