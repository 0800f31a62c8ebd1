#pragma once

#include <cstdint>

#include "matchscore/assignment.hpp"
#include "matchscore/estimator.hpp"
#include "matchscore/market.hpp"
#include "matchscore/score.hpp"

namespace matchscore {

struct UniformRange {
    double lo = 0.0;
    double hi = 1.0;
};

struct SyntheticSpec {
    int n = 10;            // buyers and sellers per side
    ParamVector beta_true; // generating coefficients
    UniformRange age_dist;
    UniformRange size_dist;
    int country_count = 4;
    double shock_sd = 0.0; // sd of the generating match-level shocks
    std::uint64_t seed = 0;
    // Robustness toggle: generate with Distance^2 in place of Distance so the
    // estimated specification is deliberately wrong.
    bool misspecify_distance_squared = false;

    void validate() const;
};

/// A generated market together with the value matrix and equilibrium that
/// produced its observed matching, so tests can certify stability directly.
struct SyntheticMarket {
    Market market;
    MatchList matches;
    ValueMatrix values;
    AssignmentResult equilibrium;
};

/// Draws firm characteristics and countries, builds the market, computes
/// values at beta_true with i.i.d. normal shocks, and returns the assignment
/// equilibrium as the observed matching. A degenerate draw with an empty
/// equilibrium is retried with an incremented sub-seed, up to 10 attempts.
/// Deterministic given spec.seed.
SyntheticMarket generate_market(const SyntheticSpec& spec);

/// Fixture variant mirroring the real data's structure, where every market
/// participant is a merger participant: restricts to matched agents and
/// re-solves until the equilibrium matches everyone. The returned matching is
/// the deterministic assignment optimum of the returned market's values.
SyntheticMarket generate_matched_market(const SyntheticSpec& spec);

struct RecoverySummary {
    int trials = 0;
    // Fraction of trials where every reported maximizer recovers the true
    // signs of beta2 and beta3.
    double sign_recovery_fraction = 0.0;
    double median_bracket_width_beta2 = 0.0;
    double median_bracket_width_beta3 = 0.0;
};

EstimationConfig default_experiment_config();

/// Repeats generate_market + maximize_score_de over derived seeds.
RecoverySummary recovery_experiment(const SyntheticSpec& spec, int trials,
                                    const EstimationConfig& est = default_experiment_config());

} // namespace matchscore
