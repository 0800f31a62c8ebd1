#pragma once

#include <array>
#include <vector>

#include "matchscore/market.hpp"

namespace matchscore {

/// Joint production coefficients. beta1 multiplies Age_b*Age_s and is pinned
/// to 1 during estimation as the scale normalization (the score depends only
/// on the direction of beta).
struct ParamVector {
    double beta1 = 1.0;
    double beta2 = 0.0; // Size_b*Size_s
    double beta3 = 0.0; // Distance_bs
};

/// f(b, s) = beta1*Age_b*Age_s + beta2*Size_b*Size_s + beta3*Distance_bs + shock.
/// The estimation objective evaluates the deterministic part (shock = 0).
double joint_production(int b, int s, const Market& market, const ParamVector& beta,
                        double shock = 0.0);

/// Precomputed pairwise-stability margins. For each unordered pair of matched
/// pairs {(b,s), (b',s')} the inequality
///     f(b,s) + f(b',s') >= f(b,s') + f(b',s)
/// reduces to  beta1*m1 + beta2*m2 + beta3*m3 >= 0  with
///     m1 = (Age_b - Age_b')*(Age_s - Age_s')
///     m2 = (Size_b - Size_b')*(Size_s - Size_s')
///     m3 = Dist_bs + Dist_b's' - Dist_bs' - Dist_b's
/// so scoring a candidate beta is one dot product per inequality. Note any
/// per-pair shock or market-wide constant cancels out of the margin.
class ScoreEvaluator {
public:
    ScoreEvaluator(const Market& market, const MatchList& matches);

    /// Number of satisfied inequalities (ties count as satisfied).
    int score(const ParamVector& beta) const;

    /// Total number of inequalities, |matches| choose 2.
    int pair_count() const { return static_cast<int>(margins_.size()); }

private:
    std::vector<std::array<double, 3>> margins_;
};

/// Counts satisfied pairwise-stability inequalities over unordered pairs of
/// matched pairs. Fewer than two matched pairs make the objective vacuous:
/// returns 0 after warning on stderr.
int score(const Market& market, const MatchList& matches, const ParamVector& beta);

/// score / (|matches| choose 2). Rejects |matches| < 2.
double percent_correct(const Market& market, const MatchList& matches, const ParamVector& beta);

} // namespace matchscore
