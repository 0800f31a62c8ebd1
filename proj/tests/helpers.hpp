#pragma once

// Shared fixture builders for the test suites.

#include <string>
#include <vector>

#include "matchscore/market.hpp"
#include "matchscore/rng.hpp"

namespace testutil {

inline matchscore::Firm firm(const std::string& name, double age, double size,
                             const std::string& country) {
    matchscore::Firm f;
    f.id = name;
    f.name = name;
    f.age_raw = age;
    f.size_raw = size;
    f.country = country;
    return f;
}

/// n-pair market matched on the diagonal, ages strictly decreasing in the
/// same order on both sides (perfectly assortative in age), sizes equal,
/// everyone in one country (so the distance matrix is degenerate).
inline std::pair<matchscore::Market, matchscore::MatchList> assortative_market(int n) {
    std::vector<matchscore::Firm> buyers, sellers;
    for (int i = 0; i < n; ++i) {
        const double age = 10.0 + n - i;
        buyers.push_back(firm("B" + std::to_string(i), age, 5.0, "aa"));
        sellers.push_back(firm("S" + std::to_string(i), age, 5.0, "aa"));
    }
    matchscore::CoordsTable coords{{"aa", {0.0, 0.0}}};
    auto market = matchscore::build_market(buyers, sellers, coords, "test");
    matchscore::MatchList matches;
    for (int i = 0; i < n; ++i) matches.pairs.emplace_back(i, i);
    return {market, matches};
}

/// Random market over a few countries, diagonal matching. The matching is
/// arbitrary, not an equilibrium; suitable wherever only the score algebra
/// matters.
inline std::pair<matchscore::Market, matchscore::MatchList> random_market(int n,
                                                                          std::uint64_t seed) {
    matchscore::RngStream rng(seed, 17);
    matchscore::CoordsTable coords;
    const int ncountry = 3;
    for (int c = 0; c < ncountry; ++c)
        coords["c" + std::to_string(c)] =
            matchscore::LatLon{rng.uniform(-60, 60), rng.uniform(-180, 180)};
    std::vector<matchscore::Firm> buyers, sellers;
    for (int i = 0; i < n; ++i) {
        buyers.push_back(firm("B" + std::to_string(i), rng.uniform(0, 50), rng.uniform(0, 9000),
                              "c" + std::to_string(rng.uniform_int(0, ncountry - 1))));
        sellers.push_back(firm("S" + std::to_string(i), rng.uniform(0, 50), rng.uniform(0, 9000),
                               "c" + std::to_string(rng.uniform_int(0, ncountry - 1))));
    }
    auto market = matchscore::build_market(buyers, sellers, coords, "test");
    matchscore::MatchList matches;
    for (int i = 0; i < n; ++i) matches.pairs.emplace_back(i, i);
    return {market, matches};
}

} // namespace testutil
