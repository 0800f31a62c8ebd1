#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "matchscore/assignment.hpp"
#include "matchscore/market.hpp"
#include "matchscore/score.hpp"

namespace matchscore {

struct CounterfactualConfig {
    ParamVector beta;       // typically the upper bounds of the identified set
    int draws = 100;        // Monte Carlo shock draws
    double shock_sd = 1.0;  // standard deviation of the i.i.d. normal shocks
    std::uint64_t seed = 0;
    bool prohibit_same_country = true;
    // When set, agents whose observed merger is same-country are removed from
    // the market instead of merely having pairs masked. Proportions are still
    // reported against the full data match count.
    bool drop_same_country_agents = false;

    void validate() const;
};

struct MinMax {
    double min = 0.0;
    double max = 0.0;
};

struct DrawOutcome {
    int total_matches = 0; // matched pairs in the draw's equilibrium
    int same_matches = 0;  // of those, identical to an observed data pair
};

struct CounterfactualStats {
    int matching_num_data = 0; // |matches| in the data, the denominator
    MinMax prop_total;         // over draws, total_matches / matching_num_data
    MinMax prop_same;          // over draws, same_matches / matching_num_data
    std::vector<DrawOutcome> per_draw;
};

/// Builds the value matrix for one shock draw. With prohibition on, every
/// same-country pair (normalized distance exactly 1e-6) is blocked, realizing
/// the "-infinity" branch of the counterfactual production function as a
/// feasibility mask.
ValueMatrix counterfactual_values(const Market& market, const ParamVector& beta,
                                  const Matrix& shocks, bool prohibit);

/// Simulates `draws` equilibrium matchings under i.i.d. normal shocks and the
/// same-country prohibition, reporting min/max bounds of the total-match and
/// same-match proportions relative to the data. Deterministic given seed;
/// draws run in parallel on independent RNG streams.
CounterfactualStats simulate(const Market& market, const MatchList& matches,
                             const CounterfactualConfig& config);

} // namespace matchscore
