#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matchscore/market.hpp"
#include "matchscore/score.hpp"

namespace matchscore {

struct EstimationConfig {
    double lower_bound = -10.0; // search box per free coordinate
    double upper_bound = 10.0;
    int runs = 100;        // independent restarts
    int population = 1000; // DE population per restart
    int max_generations = 60;
    std::uint64_t seed = 0;
    std::optional<double> grid_step; // set -> exhaustive grid oracle instead of DE

    void validate() const;
};

/// Per-coordinate [lower, upper] over the set of score maximizers.
struct Bracket {
    double lower = 0.0;
    double upper = 0.0;
    bool point_identified(double tol = 1e-9) const { return upper - lower <= tol; }
};

/// The set of parameter vectors attaining the best score found. beta1 is
/// fixed at 1, so the free coordinates are (beta2, beta3). `maximizers` is a
/// representative sample (capped, deduplicated at 1e-9, always containing the
/// per-coordinate extremes); `maximizer_count` counts distinct maximizers
/// encountered (saturating on very large plateaus). The brackets cover every
/// maximizer seen, stored or not.
struct IdentifiedSet {
    std::vector<ParamVector> maximizers;
    std::size_t maximizer_count = 0;
    int max_score = 0;
    int pair_count = 0; // |matches| choose 2
    Bracket beta2;
    Bracket beta3;
    double percent_correct = 0.0;
};

/// Maximizes the score with `runs` independent differential-evolution
/// restarts over (beta2, beta3) in the search box, beta1 = 1. The score is
/// piecewise constant, so every evaluated point attaining the global best is
/// collected and the plateau is then extended by an axis-aligned lattice walk
/// (step 1e-3) from the extreme maximizers to sharpen the brackets.
/// Deterministic given config.seed; restarts run in parallel.
IdentifiedSet maximize_score_de(const Market& market, const MatchList& matches,
                                const EstimationConfig& config);

/// Brute-force oracle: scores every lattice point of the box with the given
/// step (endpoints included exactly) and returns the exact identified set
/// restricted to the grid. Rejects grids above 10^7 points.
IdentifiedSet maximize_score_grid(const Market& market, const MatchList& matches,
                                  double lower_bound, double upper_bound, double grid_step);

struct FitReport {
    std::string regime;
    int match_count = 0;
    int pair_count = 0;
    int max_score = 0;
    double percent_correct = 0.0;
    Bracket beta2;
    Bracket beta3;
};

/// Assembles the reporting record, re-scoring every maximizer as an internal
/// consistency check (each must reproduce max_score exactly).
FitReport fit_report(const Market& market, const MatchList& matches, const IdentifiedSet& set);

} // namespace matchscore
