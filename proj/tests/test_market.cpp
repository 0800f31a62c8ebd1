#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "matchscore/errors.hpp"
#include "matchscore/market.hpp"
#include "matchscore/rng.hpp"

using namespace matchscore;

TEST_CASE("normalize_vector maps endpoints and midpoints") {
    CHECK(normalize_vector({10.0}) == std::vector<double>{1.0});
    CHECK(normalize_vector({10.0, 30.0}) == std::vector<double>{1e-6, 1.0});

    const auto v = normalize_vector({10.0, 20.0, 30.0});
    CHECK(v[0] == 1e-6);
    CHECK(v[1] == doctest::Approx(0.5000005).epsilon(1e-12));
    CHECK(v[2] == 1.0);
}

TEST_CASE("normalize_vector rejects bad input") {
    CHECK_THROWS_AS(normalize_vector({}), ValidationError);
    CHECK_THROWS_AS(normalize_vector({1.0, -0.5}), ValidationError);
    CHECK_THROWS_AS(normalize_vector({1.0, std::nan("")}), ValidationError);
    CHECK_THROWS_AS(normalize_vector({1.0, std::numeric_limits<double>::infinity()}),
                    ValidationError);
}

TEST_CASE("normalize_vector is monotone and affine-invariant") {
    RngStream rng(42, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> raw(1 + rng.uniform_int(1, 20));
        for (double& x : raw) x = rng.uniform(0, 100);
        const auto out = normalize_vector(raw);
        for (std::size_t i = 0; i < raw.size(); ++i)
            for (std::size_t j = 0; j < raw.size(); ++j)
                if (raw[i] <= raw[j]) CHECK(out[i] <= out[j]);

        // positive affine transform of the raw data leaves the output unchanged
        const double a = rng.uniform(0.1, 5.0), c = rng.uniform(0.0, 10.0);
        std::vector<double> shifted(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) shifted[i] = a * raw[i] + c;
        const auto out2 = normalize_vector(shifted);
        for (std::size_t i = 0; i < raw.size(); ++i)
            CHECK(out2[i] == doctest::Approx(out[i]).epsilon(1e-12));
    }
}

TEST_CASE("pair_distance") {
    Firm a = testutil::firm("a", 1, 1, "xx");
    Firm b = testutil::firm("b", 1, 1, "yy");

    SUBCASE("same country is zero regardless of coordinates") {
        Firm a2 = a;
        a2.capital = LatLon{10, 20};
        Firm a3 = testutil::firm("c", 1, 1, "xx");
        a3.capital = LatLon{-50, 100};
        CHECK(pair_distance(a2, a3) == 0.0);
        CHECK(pair_distance(a, a3) == 0.0); // missing coords but same country
    }
    SUBCASE("3-4-5 triangle") {
        a.capital = LatLon{0, 0};
        b.capital = LatLon{3, 4};
        CHECK(pair_distance(a, b) == 5.0);
    }
    SUBCASE("Tokyo-Seoul style coordinates") {
        a.capital = LatLon{35.68, 139.69};
        b.capital = LatLon{37.57, 126.98};
        CHECK(pair_distance(a, b) ==
              doctest::Approx(std::sqrt(1.89 * 1.89 + 12.71 * 12.71)).epsilon(1e-12));
        CHECK(pair_distance(a, b) == doctest::Approx(12.8497).epsilon(1e-4));
    }
    SUBCASE("missing coordinates across countries is an error") {
        a.capital = LatLon{0, 0};
        CHECK_THROWS_AS(pair_distance(a, b), ValidationError);
    }
}

TEST_CASE("build_market: all same country gives degenerate distance matrix") {
    auto [market, matches] = testutil::assortative_market(2);
    for (int b = 0; b < 2; ++b)
        for (int s = 0; s < 2; ++s) CHECK(market.distance.at(b, s) == 1.0);
}

TEST_CASE("build_market: mixed countries pin same-country pairs to 1e-6") {
    CoordsTable coords{{"xx", {0, 0}}, {"yy", {3, 4}}};
    std::vector<Firm> buyers{testutil::firm("b0", 5, 10, "xx"), testutil::firm("b1", 7, 20, "yy")};
    std::vector<Firm> sellers{testutil::firm("s0", 6, 30, "xx"), testutil::firm("s1", 8, 40, "yy")};
    const Market m = build_market(buyers, sellers, coords, "r");
    CHECK(m.distance.at(0, 0) == 1e-6);
    CHECK(m.distance.at(1, 1) == 1e-6);
    CHECK(m.distance.at(0, 1) == 1.0);
    CHECK(m.distance.at(1, 0) == 1.0);

    // pooled normalization: buyer and seller characteristics share a scale
    CHECK(m.age_b[0] == 1e-6);  // age 5 is the pool minimum
    CHECK(m.age_s[1] == 1.0);   // age 8 is the pool maximum
    CHECK(m.size_b[0] == 1e-6); // size 10 is the pool minimum
    CHECK(m.size_s[1] == 1.0);  // size 40 is the pool maximum
}

TEST_CASE("build_market is deterministic and validates") {
    auto [m1, x1] = testutil::random_market(14, 7);
    auto [m2, x2] = testutil::random_market(14, 7);
    CHECK(m1.age_b == m2.age_b);
    CHECK(m1.size_s == m2.size_s);
    CHECK(m1.distance == m2.distance);
    CHECK_NOTHROW(m1.validate());
    CHECK_NOTHROW(x1.validate(m1.size()));
}

TEST_CASE("build_market error paths") {
    CoordsTable coords{{"xx", {0, 0}}};
    std::vector<Firm> one{testutil::firm("b", 1, 1, "xx")};
    std::vector<Firm> two{testutil::firm("s0", 1, 1, "xx"), testutil::firm("s1", 1, 1, "xx")};
    CHECK_THROWS_AS(build_market(one, two, coords, "r"), ValidationError);

    std::vector<Firm> bad{testutil::firm("b", 1, 1, "zz")};
    std::vector<Firm> s{testutil::firm("s", 1, 1, "xx")};
    CHECK_THROWS_AS(build_market(bad, s, coords, "r"), ValidationError);

    std::vector<Firm> neg{testutil::firm("b", -1, 1, "xx")};
    CHECK_THROWS_AS(build_market(neg, s, coords, "r"), ValidationError);
}

TEST_CASE("MatchList validation") {
    MatchList ml;
    ml.pairs = {{0, 1}, {1, 0}};
    CHECK_NOTHROW(ml.validate(2));
    ml.pairs = {{0, 1}, {0, 0}};
    CHECK_THROWS_AS(ml.validate(2), ValidationError);
    ml.pairs = {{0, 1}, {1, 1}};
    CHECK_THROWS_AS(ml.validate(2), ValidationError);
    ml.pairs = {{0, 2}};
    CHECK_THROWS_AS(ml.validate(2), ValidationError);
}
