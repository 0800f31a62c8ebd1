#include "matchscore/counterfactual.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "matchscore/errors.hpp"
#include "matchscore/parallel.hpp"
#include "matchscore/rng.hpp"

namespace matchscore {

void CounterfactualConfig::validate() const {
    if (draws < 1) throw ValidationError("counterfactual config: draws must be >= 1");
    if (!(shock_sd >= 0.0)) throw ValidationError("counterfactual config: shock_sd must be >= 0");
    if (!std::isfinite(beta.beta1) || !std::isfinite(beta.beta2) || !std::isfinite(beta.beta3))
        throw ValidationError("counterfactual config: non-finite beta");
}

ValueMatrix counterfactual_values(const Market& market, const ParamVector& beta,
                                  const Matrix& shocks, bool prohibit) {
    const int n = market.size();
    if (shocks.rows() != n || shocks.cols() != n)
        throw ValidationError("counterfactual_values: shock matrix has wrong shape");
    for (double x : shocks.flat())
        if (!std::isfinite(x)) throw ValidationError("counterfactual_values: non-finite shock");

    ValueMatrix vm(n);
    for (int b = 0; b < n; ++b) {
        for (int s = 0; s < n; ++s) {
            vm.values.at(b, s) = joint_production(b, s, market, beta, shocks.at(b, s));
            // The same-country sentinel is the normalized distance 1e-6; in a
            // degenerate market with no distance variation the sentinel is
            // absent, so country equality decides there.
            const bool same_country = market.distance.at(b, s) == kNormMin ||
                                      market.buyers[b].country == market.sellers[s].country;
            vm.blocked.at(b, s) = (prohibit && same_country) ? 1 : 0;
        }
    }
    return vm;
}

namespace {

/// Rebuilds the market keeping only agents whose observed merger crosses a
/// country border. Returns the restricted market, its match list, and for
/// each restricted pair the index of the originating data pair.
struct RestrictedMarket {
    Market market;
    MatchList matches;
};

RestrictedMarket drop_same_country(const Market& market, const MatchList& matches) {
    std::vector<Firm> buyers, sellers;
    MatchList kept;
    for (const auto& [b, s] : matches.pairs) {
        if (market.buyers[b].country == market.sellers[s].country) continue;
        kept.pairs.emplace_back(static_cast<int>(buyers.size()), static_cast<int>(sellers.size()));
        buyers.push_back(market.buyers[b]);
        sellers.push_back(market.sellers[s]);
    }
    if (kept.pairs.empty())
        throw ValidationError("counterfactual: no cross-country merger pairs to retain");
    CoordsTable coords;
    for (const auto& f : buyers) coords[f.country] = *f.capital;
    for (const auto& f : sellers) coords[f.country] = *f.capital;
    RestrictedMarket out;
    out.market = build_market(std::move(buyers), std::move(sellers), coords, market.regime);
    out.matches = std::move(kept);
    return out;
}

} // namespace

CounterfactualStats simulate(const Market& market, const MatchList& matches,
                             const CounterfactualConfig& config) {
    config.validate();
    matches.validate(market.size());
    if (matches.size() < 1) throw ValidationError("simulate: needs at least 1 observed match");

    const Market* mkt = &market;
    const MatchList* obs = &matches;
    RestrictedMarket restricted;
    if (config.drop_same_country_agents) {
        restricted = drop_same_country(market, matches);
        mkt = &restricted.market;
        obs = &restricted.matches;
    }
    const int n = mkt->size();
    std::set<std::pair<int, int>> observed(obs->pairs.begin(), obs->pairs.end());

    std::vector<DrawOutcome> outcomes(config.draws);
    parallel_for_indexed(config.draws, [&](int d) {
        RngStream rng(config.seed, static_cast<std::uint64_t>(d));
        Matrix shocks(n, n);
        for (double& x : shocks.flat()) x = rng.normal(config.shock_sd);
        const ValueMatrix vm = counterfactual_values(*mkt, config.beta, shocks,
                                                     config.prohibit_same_country);
        const AssignmentResult eq = solve_assignment(vm);
        DrawOutcome o;
        o.total_matches = static_cast<int>(eq.matching.size());
        for (const auto& pair : eq.matching)
            if (observed.count(pair)) ++o.same_matches;
        outcomes[d] = o;
    });

    CounterfactualStats stats;
    stats.matching_num_data = matches.size(); // full data count even in drop mode
    stats.per_draw = std::move(outcomes);
    const double denom = static_cast<double>(stats.matching_num_data);
    stats.prop_total = {1e300, -1e300};
    stats.prop_same = {1e300, -1e300};
    for (const auto& o : stats.per_draw) {
        const double pt = o.total_matches / denom;
        const double ps = o.same_matches / denom;
        stats.prop_total.min = std::min(stats.prop_total.min, pt);
        stats.prop_total.max = std::max(stats.prop_total.max, pt);
        stats.prop_same.min = std::min(stats.prop_same.min, ps);
        stats.prop_same.max = std::max(stats.prop_same.max, ps);
    }
    return stats;
}

} // namespace matchscore
