#include "matchscore/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "matchscore/errors.hpp"
#include "matchscore/rng.hpp"

namespace matchscore {

void SyntheticSpec::validate() const {
    if (n < 2) throw ValidationError("synthetic spec: n must be >= 2");
    if (country_count < 1) throw ValidationError("synthetic spec: country_count must be >= 1");
    if (!(shock_sd >= 0.0)) throw ValidationError("synthetic spec: shock_sd must be >= 0");
    if (!(age_dist.lo >= 0.0 && age_dist.lo <= age_dist.hi))
        throw ValidationError("synthetic spec: bad age distribution range");
    if (!(size_dist.lo >= 0.0 && size_dist.lo <= size_dist.hi))
        throw ValidationError("synthetic spec: bad size distribution range");
}

namespace {

std::string country_code(int k) { return "C" + std::to_string(k); }

struct RawDraw {
    std::vector<Firm> buyers, sellers;
    CoordsTable coords;
    Matrix shocks;
};

RawDraw draw_raw(const SyntheticSpec& spec, std::uint64_t attempt) {
    RngStream rng(spec.seed, attempt);
    RawDraw d;
    const int n = spec.n;
    d.buyers.resize(n);
    d.sellers.resize(n);
    auto all = [&](auto fn) {
        for (int i = 0; i < n; ++i) fn(d.buyers[i]);
        for (int i = 0; i < n; ++i) fn(d.sellers[i]);
    };
    all([&](Firm& f) { f.age_raw = rng.uniform(spec.age_dist.lo, spec.age_dist.hi); });
    all([&](Firm& f) { f.size_raw = rng.uniform(spec.size_dist.lo, spec.size_dist.hi); });
    all([&](Firm& f) { f.country = country_code(rng.uniform_int(0, spec.country_count - 1)); });
    for (int k = 0; k < spec.country_count; ++k)
        d.coords[country_code(k)] = LatLon{rng.uniform(-60.0, 60.0), rng.uniform(-180.0, 180.0)};
    for (int i = 0; i < n; ++i) {
        d.buyers[i].id = "synthetic/buyer/" + std::to_string(i + 1);
        d.buyers[i].name = "B" + std::to_string(i + 1);
        d.sellers[i].id = "synthetic/seller/" + std::to_string(i + 1);
        d.sellers[i].name = "S" + std::to_string(i + 1);
    }
    d.shocks = Matrix(n, n);
    for (double& x : d.shocks.flat()) x = rng.normal(spec.shock_sd);
    return d;
}

ValueMatrix values_for(const Market& market, const SyntheticSpec& spec, const Matrix& shocks) {
    const int n = market.size();
    ValueMatrix vm(n);
    for (int b = 0; b < n; ++b) {
        for (int s = 0; s < n; ++s) {
            double v = joint_production(b, s, market, spec.beta_true, shocks.at(b, s));
            if (spec.misspecify_distance_squared) {
                const double dist = market.distance.at(b, s);
                v += spec.beta_true.beta3 * (dist * dist - dist);
            }
            vm.values.at(b, s) = v;
        }
    }
    return vm;
}

SyntheticMarket solve_draw(const SyntheticSpec& spec, const RawDraw& d) {
    SyntheticMarket out;
    out.market = build_market(d.buyers, d.sellers, d.coords, "synthetic");
    out.values = values_for(out.market, spec, d.shocks);
    out.equilibrium = solve_assignment(out.values);
    out.matches.pairs = out.equilibrium.matching;
    return out;
}

} // namespace

SyntheticMarket generate_market(const SyntheticSpec& spec) {
    spec.validate();
    for (std::uint64_t attempt = 0; attempt < 10; ++attempt) {
        SyntheticMarket m = solve_draw(spec, draw_raw(spec, attempt));
        if (!m.matches.pairs.empty()) return m;
    }
    throw ValidationError("generate_market: empty equilibrium matching in 10 consecutive attempts");
}

SyntheticMarket generate_matched_market(const SyntheticSpec& spec) {
    spec.validate();
    for (std::uint64_t attempt = 0; attempt < 10; ++attempt) {
        RawDraw d = draw_raw(spec, attempt);
        // Restrict to matched agents and re-solve until the equilibrium of the
        // renormalized market matches everyone (it can only shrink, so this
        // terminates).
        while (static_cast<int>(d.buyers.size()) >= 2) {
            SyntheticMarket m = solve_draw(spec, d);
            if (static_cast<int>(m.matches.pairs.size()) == m.market.size()) return m;
            if (m.matches.pairs.empty()) break;
            RawDraw next;
            next.coords = d.coords;
            const int kept = static_cast<int>(m.matches.pairs.size());
            next.shocks = Matrix(kept, kept);
            for (int i = 0; i < kept; ++i) {
                const auto [b, s] = m.matches.pairs[i];
                next.buyers.push_back(d.buyers[b]);
                next.sellers.push_back(d.sellers[s]);
                for (int j = 0; j < kept; ++j)
                    next.shocks.at(i, j) = d.shocks.at(b, m.matches.pairs[j].second);
            }
            d = std::move(next);
        }
    }
    throw ValidationError("generate_matched_market: degenerate draws in 10 consecutive attempts");
}

EstimationConfig default_experiment_config() {
    EstimationConfig cfg;
    cfg.runs = 8;
    cfg.population = 64;
    cfg.max_generations = 80;
    return cfg;
}

RecoverySummary recovery_experiment(const SyntheticSpec& spec, int trials,
                                    const EstimationConfig& est) {
    spec.validate();
    est.validate();
    if (trials < 1) throw ValidationError("recovery_experiment: trials must be >= 1");

    const int want2 = (spec.beta_true.beta2 > 0) - (spec.beta_true.beta2 < 0);
    const int want3 = (spec.beta_true.beta3 > 0) - (spec.beta_true.beta3 < 0);

    int recovered = 0;
    std::vector<double> widths2, widths3;
    for (int t = 0; t < trials; ++t) {
        SyntheticSpec sub = spec;
        sub.seed = splitmix64(splitmix64(spec.seed) + static_cast<std::uint64_t>(t) + 1);
        const SyntheticMarket gen = generate_market(sub);
        if (gen.matches.size() < 2) {
            widths2.push_back(est.upper_bound - est.lower_bound);
            widths3.push_back(est.upper_bound - est.lower_bound);
            continue;
        }
        EstimationConfig cfg = est;
        cfg.seed = splitmix64(sub.seed ^ 0xE57ULL);
        const IdentifiedSet set = maximize_score_de(gen.market, gen.matches, cfg);
        widths2.push_back(set.beta2.upper - set.beta2.lower);
        widths3.push_back(set.beta3.upper - set.beta3.lower);
        bool ok = true;
        for (const auto& b : set.maximizers) {
            if (want2 != 0 && ((b.beta2 > 0) - (b.beta2 < 0)) != want2) ok = false;
            if (want3 != 0 && ((b.beta3 > 0) - (b.beta3 < 0)) != want3) ok = false;
        }
        if (ok) ++recovered;
    }

    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t m = v.size() / 2;
        return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
    };
    RecoverySummary summary;
    summary.trials = trials;
    summary.sign_recovery_fraction = static_cast<double>(recovered) / trials;
    summary.median_bracket_width_beta2 = median(widths2);
    summary.median_bracket_width_beta3 = median(widths3);
    return summary;
}

} // namespace matchscore
