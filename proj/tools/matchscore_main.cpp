// matchscore: estimation and counterfactual simulation for one-to-one
// transferable-utility matching markets.
//
//   matchscore estimate        maximum score estimation of (beta2, beta3)
//   matchscore counterfactual  same-country prohibition simulation
//   matchscore synthetic       synthetic fixtures and recovery experiments
//
// Exit codes: 0 success, 1 input/validation error, 2 numerical/solver error.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matchscore/counterfactual.hpp"
#include "matchscore/errors.hpp"
#include "matchscore/estimator.hpp"
#include "matchscore/ingest.hpp"
#include "matchscore/synthetic.hpp"
#include "matchscore/version.hpp"

using json = nlohmann::json;
using namespace matchscore;

namespace {

std::string fmt3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string fmt_bracket(const Bracket& b) {
    return "[" + fmt3(b.lower) + "," + fmt3(b.upper) + "]";
}

std::string fmt_minmax(const MinMax& m) {
    return "[" + fmt3(m.min) + "," + fmt3(m.max) + "]";
}

/// FNV-1a 64 over the file bytes; enough to pin inputs in the manifest.
std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

json make_manifest(const std::string& command, const std::vector<std::string>& argv_tail,
                   const json& config, const std::vector<std::pair<std::string, std::string>>& inputs,
                   std::uint64_t seed, const Timer& timer) {
    json inputs_json = json::object();
    for (const auto& [label, path] : inputs)
        inputs_json[label] = {{"path", path}, {"digest", file_digest(path)}};
    return json{{"command", command},
                {"arguments", argv_tail},
                {"config", config},
                {"inputs", inputs_json},
                {"seed", seed},
                {"tool_version", MATCHSCORE_VERSION},
                {"timings", {{"total_seconds", timer.seconds()}}}};
}

void write_result(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << doc.dump(2) << "\n";
}

std::vector<double> parse_comma_doubles(const std::string& text, std::size_t want,
                                        const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ValidationError(flag + ": '" + tok + "' is not a number");
        }
    }
    if (out.size() != want)
        throw ValidationError(flag + ": expected " + std::to_string(want) +
                              " comma-separated values, got " + std::to_string(out.size()));
    return out;
}

struct MarketArgs {
    std::string mergers, panel, coords, regime;

    void attach(CLI::App* cmd) {
        cmd->add_option("--mergers", mergers, "merger list CSV (id,seller,buyer,year,type)")
            ->required();
        cmd->add_option("--panel", panel, "firm-year panel CSV (firm,year,age_years,size_teu,country)")
            ->required();
        cmd->add_option("--coords", coords, "capital coordinates CSV (country,capital,lat,lon)")
            ->required();
        cmd->add_option("--regime", regime, "regime label, e.g. 1991-2005")->required();
    }
    std::vector<std::pair<std::string, std::string>> inputs() const {
        return {{"mergers", mergers}, {"panel", panel}, {"coords", coords}};
    }
};

// ---------------------------------------------------------------- estimate

int run_estimate(const MarketArgs& in, const EstimationConfig& cfg, const std::string& out_path,
                 const std::vector<std::string>& argv_tail) {
    Timer timer;
    const RegimeData data = load_regime(in.mergers, in.panel, in.coords, in.regime);

    IdentifiedSet set;
    std::string method;
    if (cfg.grid_step) {
        set = maximize_score_grid(data.market, data.matches, cfg.lower_bound, cfg.upper_bound,
                                  *cfg.grid_step);
        method = "grid";
    } else {
        set = maximize_score_de(data.market, data.matches, cfg);
        method = "de";
    }
    const FitReport rep = fit_report(data.market, data.matches, set);

    std::cout << "Matching maximum score estimation\n";
    std::cout << "Regime: " << rep.regime << "  (" << rep.match_count << " matches, "
              << rep.pair_count << " inequalities)\n\n";
    std::cout << "  Firm age: beta1             1\n";
    std::cout << "  Firm size (TEU): beta2      " << fmt_bracket(rep.beta2) << "\n";
    std::cout << "  Distance: beta3             " << fmt_bracket(rep.beta3) << "\n\n";
    std::cout << "  Max score                   " << rep.max_score << "\n";
    std::cout << "  % of correct matches        " << fmt3(rep.percent_correct) << "\n";
    std::cout << "  Method                      " << method;
    if (method == "de")
        std::cout << " (" << cfg.runs << " runs, population " << cfg.population << ")";
    else
        std::cout << " (step " << *cfg.grid_step << ")";
    std::cout << "\n";

    // Cap the embedded maximizer sample; brackets always cover the full set.
    json maximizers = json::array();
    const std::size_t cap = 200;
    for (std::size_t i = 0; i < set.maximizers.size() && i < cap; ++i)
        maximizers.push_back({set.maximizers[i].beta2, set.maximizers[i].beta3});

    json config{{"lower_bound", cfg.lower_bound},
                {"upper_bound", cfg.upper_bound},
                {"runs", cfg.runs},
                {"population", cfg.population},
                {"max_generations", cfg.max_generations},
                {"seed", cfg.seed},
                {"method", method}};
    if (cfg.grid_step) config["grid_step"] = *cfg.grid_step;

    json doc{{"schema_version", 1},
             {"command", "estimate"},
             {"result",
              {{"regime", rep.regime},
               {"match_count", rep.match_count},
               {"inequality_count", rep.pair_count},
               {"max_score", rep.max_score},
               {"percent_correct", rep.percent_correct},
               {"beta1", 1.0},
               {"brackets",
                {{"beta2", {rep.beta2.lower, rep.beta2.upper}},
                 {"beta3", {rep.beta3.lower, rep.beta3.upper}}}},
               {"point_identified",
                {{"beta2", rep.beta2.point_identified()}, {"beta3", rep.beta3.point_identified()}}},
               {"maximizer_count", set.maximizer_count},
               {"maximizers", maximizers},
               {"method", method}}},
             {"manifest", make_manifest("estimate", argv_tail, config, in.inputs(), cfg.seed, timer)}};
    write_result(out_path, doc);
    std::cout << "\nResult written to " << out_path << "\n";
    return 0;
}

// ----------------------------------------------------------- counterfactual

ParamVector beta_from_result(const std::string& path, bool use_lower) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError(path + ": not a valid result document: " + e.what());
    }
    if (!doc.contains("result") || !doc["result"].contains("brackets"))
        throw ValidationError(path + ": no estimation brackets found");
    const auto& br = doc["result"]["brackets"];
    const int side = use_lower ? 0 : 1;
    ParamVector beta;
    beta.beta2 = br.at("beta2").at(side).get<double>();
    beta.beta3 = br.at("beta3").at(side).get<double>();
    return beta;
}

int run_counterfactual(const MarketArgs& in, const CounterfactualConfig& cfg,
                       const std::string& beta_desc, const std::string& out_path,
                       const std::vector<std::string>& argv_tail) {
    Timer timer;
    const RegimeData data = load_regime(in.mergers, in.panel, in.coords, in.regime);
    const CounterfactualStats stats = simulate(data.market, data.matches, cfg);

    std::cout << "Counterfactual simulation"
              << (cfg.prohibit_same_country ? ": same-country mergers prohibited" : " (no prohibition)")
              << "\n";
    std::cout << "Regime: " << data.market.regime << "\n\n";
    std::cout << "  Matching Num (data)                       " << stats.matching_num_data << "\n";
    std::cout << "  Prop total match (counterfactual/data)    " << fmt_minmax(stats.prop_total)
              << "\n";
    std::cout << "  Prop same match (counterfactual/data)     " << fmt_minmax(stats.prop_same)
              << "\n\n";
    std::cout << "  (" << cfg.draws << " draws, shock sd " << cfg.shock_sd << ", beta = (1, "
              << cfg.beta.beta2 << ", " << cfg.beta.beta3 << ") from " << beta_desc << ")\n";

    json per_draw = json::array();
    for (const auto& d : stats.per_draw) per_draw.push_back({d.total_matches, d.same_matches});

    json config{{"beta", {cfg.beta.beta1, cfg.beta.beta2, cfg.beta.beta3}},
                {"beta_source", beta_desc},
                {"draws", cfg.draws},
                {"shock_sd", cfg.shock_sd},
                {"seed", cfg.seed},
                {"prohibit_same_country", cfg.prohibit_same_country},
                {"drop_same_country_agents", cfg.drop_same_country_agents}};

    json doc{{"schema_version", 1},
             {"command", "counterfactual"},
             {"result",
              {{"regime", data.market.regime},
               {"matching_num_data", stats.matching_num_data},
               {"prop_total", {{"min", stats.prop_total.min}, {"max", stats.prop_total.max}}},
               {"prop_same", {{"min", stats.prop_same.min}, {"max", stats.prop_same.max}}},
               {"per_draw", per_draw}}},
             {"manifest",
              make_manifest("counterfactual", argv_tail, config, in.inputs(), cfg.seed, timer)}};
    write_result(out_path, doc);
    std::cout << "\nResult written to " << out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------- synthetic

int run_synthetic(const SyntheticSpec& spec, int trials, const std::string& out_dir,
                  const std::string& out_path, const std::vector<std::string>& argv_tail) {
    Timer timer;
    std::filesystem::create_directories(out_dir);
    const auto dir = std::filesystem::path(out_dir);
    const std::string mergers = (dir / "synthetic_mergers.csv").string();
    const std::string panel = (dir / "synthetic_panel.csv").string();
    const std::string coords = (dir / "synthetic_coords.csv").string();

    const SyntheticMarket fixture = generate_matched_market(spec);
    write_fixture_csvs(fixture.market, fixture.matches, mergers, panel, coords);
    std::cout << "Synthetic market: n = " << fixture.market.size() << ", "
              << fixture.matches.size() << " matched pairs\n";
    std::cout << "Fixtures written:\n  " << mergers << "\n  " << panel << "\n  " << coords << "\n";

    json recovery = json::object();
    if (trials > 0) {
        const RecoverySummary sum = recovery_experiment(spec, trials);
        std::cout << "\nRecovery experiment (" << trials << " trials)\n";
        std::cout << "  sign recovery fraction      " << fmt3(sum.sign_recovery_fraction) << "\n";
        std::cout << "  median bracket width beta2  " << fmt3(sum.median_bracket_width_beta2) << "\n";
        std::cout << "  median bracket width beta3  " << fmt3(sum.median_bracket_width_beta3) << "\n";
        recovery = {{"trials", sum.trials},
                    {"sign_recovery_fraction", sum.sign_recovery_fraction},
                    {"median_bracket_width_beta2", sum.median_bracket_width_beta2},
                    {"median_bracket_width_beta3", sum.median_bracket_width_beta3}};
    }

    json config{{"n", spec.n},
                {"beta_true", {spec.beta_true.beta1, spec.beta_true.beta2, spec.beta_true.beta3}},
                {"country_count", spec.country_count},
                {"shock_sd", spec.shock_sd},
                {"seed", spec.seed},
                {"trials", trials}};
    json doc{{"schema_version", 1},
             {"command", "synthetic"},
             {"result",
              {{"n", fixture.market.size()},
               {"match_count", fixture.matches.size()},
               {"fixtures", {{"mergers", mergers}, {"panel", panel}, {"coords", coords}}},
               {"recovery", recovery}}},
             {"manifest", make_manifest("synthetic", argv_tail, config, {}, spec.seed, timer)}};
    write_result(out_path, doc);
    std::cout << "\nResult written to " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matching maximum score estimation and assignment-game counterfactuals"};
    app.require_subcommand(1);
    app.set_version_flag("--version", MATCHSCORE_VERSION);
    std::vector<std::string> argv_tail(argv + 1, argv + argc);

    // estimate
    auto* est = app.add_subcommand("estimate", "Estimate (beta2, beta3) by maximum score");
    MarketArgs est_in;
    est_in.attach(est);
    EstimationConfig est_cfg;
    std::string est_bounds;
    double est_grid_step = 0.0;
    std::string est_out = "estimate_result.json";
    est->add_option("--seed", est_cfg.seed, "RNG seed (default 0)");
    est->add_option("--runs", est_cfg.runs, "DE restarts (default 100)");
    est->add_option("--population", est_cfg.population, "DE population per restart (default 1000)");
    est->add_option("--generations", est_cfg.max_generations, "DE generations (default 60)");
    est->add_option("--bounds", est_bounds, "search box LO,HI (default -10,10)");
    est->add_option("--grid-step", est_grid_step, "use the exhaustive grid oracle with this step");
    est->add_option("--out", est_out, "result JSON path");

    // counterfactual
    auto* cf = app.add_subcommand("counterfactual", "Simulate the same-country merger prohibition");
    MarketArgs cf_in;
    cf_in.attach(cf);
    CounterfactualConfig cf_cfg;
    std::string cf_beta, cf_beta_from;
    bool cf_use_lower = false, cf_no_prohibit = false;
    std::string cf_out = "counterfactual_result.json";
    cf->add_option("--beta", cf_beta, "explicit coefficients B1,B2,B3");
    cf->add_option("--beta-from", cf_beta_from, "take beta from an estimate result JSON");
    cf->add_flag("--use-lower-bounds", cf_use_lower,
                 "with --beta-from, use bracket lower bounds instead of upper");
    cf->add_option("--draws", cf_cfg.draws, "shock draws (default 100)");
    cf->add_option("--shock-sd", cf_cfg.shock_sd, "shock standard deviation (default 1)");
    cf->add_option("--seed", cf_cfg.seed, "RNG seed (default 0)");
    cf->add_flag("--no-prohibit", cf_no_prohibit, "disable the same-country prohibition");
    cf->add_flag("--drop-same-country-agents", cf_cfg.drop_same_country_agents,
                 "remove agents from same-country data pairs instead of masking pairs");
    cf->add_option("--out", cf_out, "result JSON path");

    // synthetic
    auto* syn = app.add_subcommand("synthetic", "Generate fixtures and run a recovery experiment");
    SyntheticSpec spec;
    std::string syn_beta = "1,5,-2";
    int syn_trials = 10;
    std::string syn_out_dir = ".";
    std::string syn_out = "synthetic_result.json";
    syn->add_option("--n", spec.n, "market size per side (default 10)");
    syn->add_option("--beta", syn_beta, "true coefficients B1,B2,B3 (default 1,5,-2)");
    syn->add_option("--countries", spec.country_count, "number of countries (default 4)");
    syn->add_option("--shock-sd", spec.shock_sd, "generating shock sd (default 0)");
    syn->add_option("--seed", spec.seed, "RNG seed (default 0)");
    syn->add_option("--trials", syn_trials, "recovery experiment trials, 0 to skip (default 10)");
    syn->add_option("--out-dir", syn_out_dir, "directory for fixture CSVs (default .)");
    syn->add_option("--out", syn_out, "summary JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed()) {
            if (!est_bounds.empty()) {
                const auto b = parse_comma_doubles(est_bounds, 2, "--bounds");
                est_cfg.lower_bound = b[0];
                est_cfg.upper_bound = b[1];
            }
            if (est->count("--grid-step")) est_cfg.grid_step = est_grid_step;
            return run_estimate(est_in, est_cfg, est_out, argv_tail);
        }
        if (cf->parsed()) {
            std::string beta_desc;
            if (!cf_beta.empty() && !cf_beta_from.empty())
                throw ValidationError("give either --beta or --beta-from, not both");
            if (!cf_beta.empty()) {
                const auto b = parse_comma_doubles(cf_beta, 3, "--beta");
                cf_cfg.beta = ParamVector{b[0], b[1], b[2]};
                beta_desc = "--beta";
            } else if (!cf_beta_from.empty()) {
                cf_cfg.beta = beta_from_result(cf_beta_from, cf_use_lower);
                beta_desc = std::string(cf_use_lower ? "lower" : "upper") + " bounds of " + cf_beta_from;
            } else {
                throw ValidationError("counterfactual needs --beta or --beta-from");
            }
            cf_cfg.prohibit_same_country = !cf_no_prohibit;
            return run_counterfactual(cf_in, cf_cfg, beta_desc, cf_out, argv_tail);
        }
        if (syn->parsed()) {
            const auto b = parse_comma_doubles(syn_beta, 3, "--beta");
            spec.beta_true = ParamVector{b[0], b[1], b[2]};
            return run_synthetic(spec, syn_trials, syn_out_dir, syn_out, argv_tail);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
