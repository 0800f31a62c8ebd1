#include <doctest.h>

#include "helpers.hpp"
#include "matchscore/errors.hpp"
#include "matchscore/estimator.hpp"
#include "matchscore/synthetic.hpp"

using namespace matchscore;

TEST_CASE("2x2 assortative assignment by hand") {
    // ages (1, 0.5) on both sides, size and distance inert: the pooled
    // normalization sends 0.5 to 1e-6, so the diagonal (1*1 + 1e-12) beats
    // the swap (2e-6) and the assortative matching is the equilibrium
    CoordsTable coords{{"xx", {0, 0}}};
    std::vector<Firm> buyers{testutil::firm("b0", 1.0, 1, "xx"), testutil::firm("b1", 0.5, 1, "xx")};
    std::vector<Firm> sellers{testutil::firm("s0", 1.0, 1, "xx"), testutil::firm("s1", 0.5, 1, "xx")};
    const Market m = build_market(buyers, sellers, coords, "r");

    ValueMatrix vm(2);
    for (int b = 0; b < 2; ++b)
        for (int s = 0; s < 2; ++s) vm.values.at(b, s) = joint_production(b, s, m, ParamVector{1, 0, 0});
    const auto r = solve_assignment(vm);
    CHECK(r.matching == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
}

TEST_CASE("generated matching is a certified equilibrium") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        SyntheticSpec spec;
        spec.n = 5;
        spec.beta_true = {1, 3, -1};
        spec.shock_sd = seed == 3 ? 0.8 : 0.0;
        spec.seed = seed;
        const auto gen = generate_market(spec);
        CHECK_NOTHROW(gen.market.validate());
        CHECK_NOTHROW(gen.matches.validate(gen.market.size()));
        CHECK(gen.matches.pairs == gen.equilibrium.matching);
        const auto check = verify_stability(gen.values, gen.equilibrium);
        CHECK(check.ok);
    }
}

TEST_CASE("generation is deterministic; distinct seeds differ") {
    SyntheticSpec spec;
    spec.n = 6;
    spec.beta_true = {1, 4, -2};
    spec.seed = 12;
    const auto a = generate_market(spec);
    const auto b = generate_market(spec);
    CHECK(a.market.age_b == b.market.age_b);
    CHECK(a.market.distance == b.market.distance);
    CHECK(a.matches.pairs == b.matches.pairs);

    spec.seed = 13;
    const auto c = generate_market(spec);
    CHECK(a.market.age_b != c.market.age_b);
}

TEST_CASE("all-negative values exhaust the regeneration budget") {
    SyntheticSpec spec;
    spec.n = 3;
    spec.beta_true = {-1.0, 0.0, -5.0}; // age term negative: every value < 0
    spec.seed = 5;
    CHECK_THROWS_AS(generate_market(spec), ValidationError);
}

TEST_CASE("generate_matched_market matches every agent at its own optimum") {
    SyntheticSpec spec;
    spec.n = 12;
    spec.beta_true = {1, 5, -2};
    spec.seed = 31;
    spec.country_count = 3;
    const auto gen = generate_matched_market(spec);
    CHECK(gen.matches.size() == gen.market.size());
    CHECK(gen.equilibrium.unmatched_buyers.empty());
    CHECK(gen.equilibrium.unmatched_sellers.empty());
    CHECK(verify_stability(gen.values, gen.equilibrium).ok);

    // shock_sd = 0: re-solving the deterministic values reproduces the
    // observed matching exactly (the counterfactual fixed point)
    ValueMatrix vm(gen.market.size());
    for (int b = 0; b < gen.market.size(); ++b)
        for (int s = 0; s < gen.market.size(); ++s)
            vm.values.at(b, s) = joint_production(b, s, gen.market, spec.beta_true);
    const auto again = solve_assignment(vm);
    CHECK(again.matching == gen.matches.pairs);
}

TEST_CASE("grid oracle recovers the generating signs at n = 20") {
    SyntheticSpec spec;
    spec.n = 20;
    spec.beta_true = {1, 5, -2};
    spec.seed = 8;
    spec.country_count = 5;
    const auto gen = generate_market(spec);
    REQUIRE(gen.matches.size() >= 2);
    const auto set = maximize_score_grid(gen.market, gen.matches, -10, 10, 0.5);
    CHECK(set.max_score == set.pair_count); // noiseless equilibrium data
    CHECK(set.beta2.lower > 0.0);
    CHECK(set.beta3.upper < 0.0);
}

TEST_CASE("recovery experiment: strong signal, no noise") {
    SyntheticSpec spec;
    spec.n = 14;
    spec.beta_true = {1, 5, -2};
    spec.seed = 100;
    EstimationConfig cfg = default_experiment_config();
    cfg.runs = 4;
    cfg.max_generations = 40;
    const auto sum = recovery_experiment(spec, 3, cfg);
    CHECK(sum.trials == 3);
    CHECK(sum.sign_recovery_fraction == 1.0);
    CHECK(sum.median_bracket_width_beta2 >= 0.0);
}

TEST_CASE("noise can only hurt recovery (paired seeds)") {
    SyntheticSpec spec;
    spec.n = 8;
    spec.beta_true = {1, 2, -1};
    spec.seed = 2000;
    EstimationConfig cfg = default_experiment_config();
    cfg.runs = 4;
    cfg.max_generations = 30;
    const auto clean = recovery_experiment(spec, 4, cfg);
    spec.shock_sd = 2.0;
    const auto noisy = recovery_experiment(spec, 4, cfg);
    CHECK(noisy.sign_recovery_fraction <= clean.sign_recovery_fraction);
}

TEST_CASE("weak identification with irrelevant coefficients") {
    SyntheticSpec spec;
    spec.n = 10;
    spec.beta_true = {1, 0, 0}; // size and distance never matter
    spec.seed = 55;
    spec.country_count = 1; // degenerate distance as well
    spec.size_dist = {0.5, 0.5};
    const auto gen = generate_market(spec);
    REQUIRE(gen.matches.size() >= 2);
    const auto set = maximize_score_grid(gen.market, gen.matches, -10, 10, 1.0);
    // sizes all equal and distances degenerate: the objective ignores both
    // free coordinates entirely, so the brackets span the whole box
    CHECK(set.beta2.upper - set.beta2.lower == 20.0);
    CHECK(set.beta3.upper - set.beta3.lower == 20.0);
}

TEST_CASE("misspecified generation still yields a valid market") {
    SyntheticSpec spec;
    spec.n = 8;
    spec.beta_true = {1, 3, -2};
    spec.seed = 9;
    spec.misspecify_distance_squared = true;
    const auto gen = generate_market(spec);
    CHECK_NOTHROW(gen.market.validate());
    CHECK(verify_stability(gen.values, gen.equilibrium).ok);
}

TEST_CASE("spec validation") {
    SyntheticSpec spec;
    spec.n = 1;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = SyntheticSpec{};
    spec.country_count = 0;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec = SyntheticSpec{};
    spec.shock_sd = -1;
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}
