#include "matchscore/score.hpp"

#include <cmath>
#include <cstdio>

#include "matchscore/errors.hpp"

namespace matchscore {

double joint_production(int b, int s, const Market& market, const ParamVector& beta,
                        double shock) {
    return beta.beta1 * market.age_b[b] * market.age_s[s] +
           beta.beta2 * market.size_b[b] * market.size_s[s] +
           beta.beta3 * market.distance.at(b, s) + shock;
}

ScoreEvaluator::ScoreEvaluator(const Market& market, const MatchList& matches) {
    matches.validate(market.size());
    const auto& p = matches.pairs;
    const int m = matches.size();
    margins_.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i) {
        const auto [b1, s1] = p[i];
        for (int j = i + 1; j < m; ++j) {
            const auto [b2, s2] = p[j];
            const double m1 = (market.age_b[b1] - market.age_b[b2]) * (market.age_s[s1] - market.age_s[s2]);
            const double m2 = (market.size_b[b1] - market.size_b[b2]) * (market.size_s[s1] - market.size_s[s2]);
            const double m3 = market.distance.at(b1, s1) + market.distance.at(b2, s2) -
                              market.distance.at(b1, s2) - market.distance.at(b2, s1);
            margins_.push_back({m1, m2, m3});
        }
    }
}

int ScoreEvaluator::score(const ParamVector& beta) const {
    int satisfied = 0;
    for (const auto& m : margins_)
        if (beta.beta1 * m[0] + beta.beta2 * m[1] + beta.beta3 * m[2] >= 0.0) ++satisfied;
    return satisfied;
}

int score(const Market& market, const MatchList& matches, const ParamVector& beta) {
    if (!std::isfinite(beta.beta1) || !std::isfinite(beta.beta2) || !std::isfinite(beta.beta3))
        throw ValidationError("score: non-finite parameter vector");
    if (matches.size() < 2) {
        matches.validate(market.size());
        std::fprintf(stderr, "matchscore: warning: fewer than 2 matched pairs, score objective is vacuous\n");
        return 0;
    }
    return ScoreEvaluator(market, matches).score(beta);
}

double percent_correct(const Market& market, const MatchList& matches, const ParamVector& beta) {
    if (matches.size() < 2)
        throw ValidationError("percent_correct: needs at least 2 matched pairs");
    ScoreEvaluator ev(market, matches);
    return static_cast<double>(ev.score(beta)) / static_cast<double>(ev.pair_count());
}

} // namespace matchscore
