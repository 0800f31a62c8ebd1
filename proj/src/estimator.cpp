#include "matchscore/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "matchscore/errors.hpp"
#include "matchscore/parallel.hpp"
#include "matchscore/rng.hpp"

namespace matchscore {

namespace {

constexpr double kDedupTol = 1e-9;
constexpr double kRefineStep = 1e-3;
constexpr std::size_t kStoreCap = 4096;  // stored sample per collector
constexpr std::size_t kSeenCap = 20000;  // dedup set bound; plateaus can be huge

using Point = std::array<double, 2>; // (beta2, beta3)

/// Accumulates evaluated points attaining the best score seen so far.
/// Stores a capped deduplicated sample plus exact per-coordinate extremes.
class MaximizerCollector {
public:
    void offer(const Point& p, int score) {
        if (score < best_) return;
        if (score > best_) reset(score);
        offer_merged(p);
    }

    void merge(const MaximizerCollector& other) {
        if (other.best_ < best_ || other.total_ == 0) return;
        if (other.best_ > best_) reset(other.best_);
        for (const auto& p : other.points_) offer_merged(p);
        for (int d = 0; d < 2; ++d) {
            offer_merged(other.arg_lo_[d]);
            offer_merged(other.arg_hi_[d]);
        }
    }

    int best_score() const { return best_; }
    std::size_t total() const { return total_; }
    const std::vector<Point>& points() const { return points_; }
    Point arg_lo(int d) const { return arg_lo_[d]; }
    Point arg_hi(int d) const { return arg_hi_[d]; }
    double lo(int d) const { return lo_[d]; }
    double hi(int d) const { return hi_[d]; }

private:
    void reset(int score) {
        best_ = score;
        seen_.clear();
        points_.clear();
        total_ = 0;
        lo_ = {1e300, 1e300};
        hi_ = {-1e300, -1e300};
    }

    void offer_merged(const Point& p) {
        // Extremes are tracked for every offer so the brackets stay exact even
        // once the dedup set saturates.
        for (int d = 0; d < 2; ++d) {
            if (p[d] < lo_[d]) { lo_[d] = p[d]; arg_lo_[d] = p; }
            if (p[d] > hi_[d]) { hi_[d] = p[d]; arg_hi_[d] = p; }
        }
        if (seen_.size() >= kSeenCap) return;
        if (!seen_.insert(quantize(p)).second) return;
        ++total_;
        if (points_.size() < kStoreCap) points_.push_back(p);
    }

    static std::pair<long long, long long> quantize(const Point& p) {
        return {std::llround(p[0] / kDedupTol), std::llround(p[1] / kDedupTol)};
    }

    int best_ = -1;
    std::set<std::pair<long long, long long>> seen_;
    std::vector<Point> points_;
    std::size_t total_ = 0;
    Point lo_{1e300, 1e300}, hi_{-1e300, -1e300};
    std::array<Point, 2> arg_lo_{}, arg_hi_{};
};

int eval_point(const ScoreEvaluator& ev, const Point& p) {
    return ev.score(ParamVector{1.0, p[0], p[1]});
}

/// One DE restart (rand/1/bin, greedy-or-equal replacement so the population
/// drifts across score plateaus).
void de_run(const ScoreEvaluator& ev, const EstimationConfig& cfg, std::uint64_t run_index,
            MaximizerCollector& collector) {
    constexpr double F = 0.7;
    constexpr double CR = 0.9;
    RngStream rng(cfg.seed, run_index);
    const double lo = cfg.lower_bound, hi = cfg.upper_bound;
    const int np = cfg.population;

    std::vector<Point> pop(np);
    std::vector<int> fitness(np);
    for (int i = 0; i < np; ++i) {
        pop[i] = {rng.uniform(lo, hi), rng.uniform(lo, hi)};
        fitness[i] = eval_point(ev, pop[i]);
        collector.offer(pop[i], fitness[i]);
    }

    for (int gen = 0; gen < cfg.max_generations; ++gen) {
        for (int i = 0; i < np; ++i) {
            int r1, r2, r3;
            do { r1 = rng.uniform_int(0, np - 1); } while (r1 == i);
            do { r2 = rng.uniform_int(0, np - 1); } while (r2 == i || r2 == r1);
            do { r3 = rng.uniform_int(0, np - 1); } while (r3 == i || r3 == r1 || r3 == r2);
            const int jrand = rng.uniform_int(0, 1);
            Point trial = pop[i];
            for (int d = 0; d < 2; ++d) {
                if (d == jrand || rng.uniform01() < CR) {
                    double v = pop[r1][d] + F * (pop[r2][d] - pop[r3][d]);
                    if (v < lo || v > hi) v = rng.uniform(lo, hi);
                    trial[d] = v;
                }
            }
            const int f = eval_point(ev, trial);
            collector.offer(trial, f);
            if (f >= fitness[i]) {
                pop[i] = trial;
                fitness[i] = f;
            }
        }
    }
}

/// Extends the plateau from a maximizer along one axis with 1e-3 steps,
/// testing the exact box edge when the walk reaches it.
void axis_walk(const ScoreEvaluator& ev, const EstimationConfig& cfg, Point p, int dim,
               int direction, int best, MaximizerCollector& collector) {
    const double lo = cfg.lower_bound, hi = cfg.upper_bound;
    while (true) {
        double next = p[dim] + direction * kRefineStep;
        if (next > hi || next < lo) {
            Point edge = p;
            edge[dim] = direction > 0 ? hi : lo;
            collector.offer(edge, eval_point(ev, edge));
            return;
        }
        Point cand = p;
        cand[dim] = next;
        const int f = eval_point(ev, cand);
        if (f < best) return;
        collector.offer(cand, f);
        p = cand;
    }
}

void refine_plateau(const ScoreEvaluator& ev, const EstimationConfig& cfg,
                    MaximizerCollector& collector) {
    // A walk can stumble onto a better plateau than the search found, which
    // resets the collector; restart refinement from the improved set.
    for (int round = 0; round < 4; ++round) {
        const int best = collector.best_score();
        std::vector<Point> seeds;
        for (int d = 0; d < 2; ++d) {
            seeds.push_back(collector.arg_lo(d));
            seeds.push_back(collector.arg_hi(d));
        }
        const auto& pts = collector.points();
        for (std::size_t i = 0; i < pts.size() && seeds.size() < 20;
             i += std::max<std::size_t>(1, pts.size() / 16))
            seeds.push_back(pts[i]);
        for (const auto& s : seeds)
            for (int d = 0; d < 2; ++d)
                for (int dir : {-1, +1}) axis_walk(ev, cfg, s, d, dir, best, collector);
        if (collector.best_score() == best) break;
    }
}

IdentifiedSet assemble(const ScoreEvaluator& ev, const MaximizerCollector& collector) {
    IdentifiedSet set;
    set.max_score = collector.best_score();
    set.pair_count = ev.pair_count();
    set.maximizer_count = collector.total();
    set.beta2 = Bracket{collector.lo(0), collector.hi(0)};
    set.beta3 = Bracket{collector.lo(1), collector.hi(1)};
    set.percent_correct = static_cast<double>(set.max_score) / set.pair_count;

    std::vector<Point> pts = collector.points();
    for (int d = 0; d < 2; ++d) {
        pts.push_back(collector.arg_lo(d));
        pts.push_back(collector.arg_hi(d));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    set.maximizers.reserve(pts.size());
    for (const auto& p : pts) set.maximizers.push_back(ParamVector{1.0, p[0], p[1]});
    return set;
}

} // namespace

void EstimationConfig::validate() const {
    if (!(lower_bound < upper_bound))
        throw ValidationError("estimation config: lower bound must be below upper bound");
    if (runs < 1) throw ValidationError("estimation config: runs must be >= 1");
    if (population < 4) throw ValidationError("estimation config: population must be >= 4 for DE");
    if (max_generations < 1) throw ValidationError("estimation config: max_generations must be >= 1");
    if (grid_step && !(*grid_step > 0.0))
        throw ValidationError("estimation config: grid step must be positive");
}

IdentifiedSet maximize_score_de(const Market& market, const MatchList& matches,
                                const EstimationConfig& config) {
    config.validate();
    if (matches.size() < 2)
        throw ValidationError("maximize_score_de: needs at least 2 matched pairs");
    const ScoreEvaluator ev(market, matches);

    std::vector<MaximizerCollector> per_run(config.runs);
    parallel_for_indexed(config.runs, [&](int r) {
        de_run(ev, config, static_cast<std::uint64_t>(r), per_run[r]);
    });

    MaximizerCollector merged;
    for (const auto& c : per_run) merged.merge(c); // index order: deterministic
    refine_plateau(ev, config, merged);
    return assemble(ev, merged);
}

IdentifiedSet maximize_score_grid(const Market& market, const MatchList& matches,
                                  double lower_bound, double upper_bound, double grid_step) {
    if (!(lower_bound < upper_bound))
        throw ValidationError("maximize_score_grid: lower bound must be below upper bound");
    if (!(grid_step > 0.0)) throw ValidationError("maximize_score_grid: grid step must be positive");
    if (matches.size() < 2)
        throw ValidationError("maximize_score_grid: needs at least 2 matched pairs");

    const double range = upper_bound - lower_bound;
    const double steps_est = std::ceil(range / grid_step - 1e-12);
    // 3162^2 is the last square below the 10^7 grid-point limit
    if (!(steps_est + 1 <= 3162.0)) {
        std::ostringstream os;
        os << "maximize_score_grid: grid of " << (steps_est + 1) << "x" << (steps_est + 1)
           << " points exceeds the 10^7 limit";
        throw ValidationError(os.str());
    }
    const long long steps = static_cast<long long>(steps_est);
    const long long npoints = steps + 1;

    const ScoreEvaluator ev(market, matches);
    MaximizerCollector collector;
    auto coord = [&](long long k) {
        return k == steps ? upper_bound : lower_bound + static_cast<double>(k) * grid_step;
    };
    for (long long i = 0; i < npoints; ++i) {
        const double b2 = coord(i);
        for (long long j = 0; j < npoints; ++j) {
            const Point p{b2, coord(j)};
            collector.offer(p, eval_point(ev, p));
        }
    }
    return assemble(ev, collector);
}

FitReport fit_report(const Market& market, const MatchList& matches, const IdentifiedSet& set) {
    const ScoreEvaluator ev(market, matches);
    for (const auto& beta : set.maximizers) {
        if (ev.score(beta) != set.max_score) {
            std::ostringstream os;
            os << "fit_report: internal consistency error: maximizer (" << beta.beta2 << ", "
               << beta.beta3 << ") re-scores to " << ev.score(beta) << ", expected "
               << set.max_score;
            throw SolverError(os.str());
        }
    }
    FitReport rep;
    rep.regime = market.regime;
    rep.match_count = matches.size();
    rep.pair_count = set.pair_count;
    rep.max_score = set.max_score;
    rep.percent_correct = set.percent_correct;
    rep.beta2 = set.beta2;
    rep.beta3 = set.beta3;
    return rep;
}

} // namespace matchscore
