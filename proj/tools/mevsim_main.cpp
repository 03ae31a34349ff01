// mevsim: dark-venue adoption game solver/simulator and swap-data analytics.
//
// Subcommands: equilibrium, simulate, verify, detect, frontrunnable, stats.
// Exit 0 on success, 1 on domain error (structured JSON on stderr), 2 on
// usage error. Every JSON artifact embeds schema_version, the resolved
// config, and the seed where one applies.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mevsim/detector.hpp"
#include "mevsim/equilibrium.hpp"
#include "mevsim/ols.hpp"
#include "mevsim/params.hpp"
#include "mevsim/sim.hpp"

using nlohmann::json;
using namespace mevsim;

namespace {

constexpr int kSchemaVersion = 1;

// round to 9 significant digits so serialized artifacts are stable
double sig9(double x) {
    if (!std::isfinite(x)) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return std::strtod(buf, nullptr);
}

json params_json(const ModelParams& p) {
    return json::parse(params_to_json_text(p));
}

json threshold_json(const ThresholdValue& t) {
    json j{{"value", sig9(t.value)},
           {"method", t.method == Method::ClosedForm ? "closed_form" : "numeric_root"},
           {"exists", t.exists}};
    if (t.closed_form_alt) j["closed_form_alt"] = sig9(*t.closed_form_alt);
    j["discrepancy"] = t.discrepancy;
    return j;
}

json thresholds_json(const ThresholdSet& th) {
    return json{{"alpha1", threshold_json(th.alpha1)}, {"alpha2", threshold_json(th.alpha2)},
                {"lambda1", threshold_json(th.lambda1)}, {"lambda2", threshold_json(th.lambda2)},
                {"lambda3", threshold_json(th.lambda3)}, {"c1", threshold_json(th.c1)},
                {"theta", threshold_json(th.theta)}};
}

const char* regime_name(AdoptionRegime r) {
    return r == AdoptionRegime::FullAdoption ? "FullAdoption" : "PartialAdoption";
}

const char* arb_regime_name(ArbRegime r) {
    switch (r) {
        case ArbRegime::BothBoth: return "BothBoth";
        case ArbRegime::BothDark: return "BothDark";
        default: return "DarkDark";
    }
}

json report_json(const EquilibriumReport& rep) {
    json cands = json::array();
    for (const auto& [a, m] : rep.candidates)
        cands.push_back(json{{"alpha", sig9(a)}, {"miner_payoff", sig9(m)}});
    return json{
        {"regime", regime_name(rep.regime)},
        {"alpha_star", sig9(rep.alpha_star)},
        {"user0_venue", to_string(rep.user0_venue)},
        {"arb_venues", {to_string(rep.arb_venues.first), to_string(rep.arb_venues.second)}},
        {"arb_regime", arb_regime_name(rep.arb_regime)},
        {"r_dark", sig9(rep.revenues.r_dark)},
        {"r_lit", sig9(rep.revenues.r_lit)},
        {"transfer_theta", sig9(rep.transfer_theta)},
        {"welfare",
         {{"user0", sig9(rep.welfare.user0)},
          {"non_frontrunnable_users", sig9(rep.welfare.non_frontrunnable_users)},
          {"miners", sig9(rep.welfare.miners)},
          {"arbitrageurs", sig9(rep.welfare.arbitrageurs)},
          {"aggregate", sig9(rep.welfare.aggregate)}}},
        {"candidates", cands}};
}

json estimate_json(const Estimate& e) {
    json j{{"mean", sig9(e.mean)}};
    if (e.se) j["se"] = sig9(*e.se);
    return j;
}

void emit(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << text;
    }
}

int domain_error(const std::string& command, const std::exception& e) {
    json err{{"schema_version", kSchemaVersion},
             {"error", {{"command", command}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 1;
}

struct GridSpec {
    std::string name;
    double start = 0, stop = 0, step = 0;
};

GridSpec parse_grid(const std::string& s) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--grid", "expected name=start:stop:step");
    GridSpec g;
    g.name = s.substr(0, eq);
    std::string rest = s.substr(eq + 1);
    if (std::sscanf(rest.c_str(), "%lf:%lf:%lf", &g.start, &g.stop, &g.step) != 3 ||
        g.step <= 0.0)
        throw CLI::ValidationError("--grid", "expected name=start:stop:step with step > 0");
    return g;
}

void set_swept(ModelParams& p, const std::string& name, double value) {
    if (name == "p")
        p.detect_prob = value;
    else if (name == "c")
        p.arb_profit = value;
    else if (name == "v0")
        p.frontrunnable_valuation = value;
    else if (name == "lambda")
        p.auction_continuation = value;
    else if (name == "eps")
        p.min_increment = value;
    else if (name == "gamma")
        p.lit_fee_multiplier = value;
    else
        throw std::invalid_argument("unknown grid parameter '" + name +
                                    "' (use p, c, v0, lambda, eps, gamma)");
}

// ---- subcommand bodies ----

int cmd_equilibrium(const std::string& params_path, const std::string& grid,
                    const std::string& out_path, bool with_transfer) {
    ModelParams params = params_from_json_file(params_path);
    if (grid.empty()) {
        EquilibriumReport rep = with_transfer ? apply_transfer(params) : spe(params);
        json j{{"schema_version", kSchemaVersion},
               {"command", "equilibrium"},
               {"config", {{"params", params_json(params)}, {"transfer", with_transfer}}},
               {"thresholds", thresholds_json(thresholds(params))},
               {"report", report_json(rep)}};
        emit(j, out_path);
        return 0;
    }
    GridSpec g = parse_grid(grid);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty() && out_path != "-") {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        out = &file;
    }
    *out << "grid_index," << g.name
         << ",regime,alpha_star,user0_venue,arb_regime,r_dark,r_lit,aggregate_welfare,"
            "alpha1,alpha2,c1\n";
    int idx = 0;
    for (double x = g.start; x <= g.stop + 1e-12 * std::fabs(g.step); x += g.step, ++idx) {
        ModelParams pt = params;
        set_swept(pt, g.name, x);
        EquilibriumReport rep = with_transfer ? apply_transfer(pt) : spe(pt);
        ThresholdSet th = thresholds(pt);
        char line[512];
        std::snprintf(line, sizeof line,
                      "%d,%.9g,%s,%.9g,%s,%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", idx, x,
                      regime_name(rep.regime), rep.alpha_star,
                      to_string(rep.user0_venue), arb_regime_name(rep.arb_regime),
                      rep.revenues.r_dark, rep.revenues.r_lit, rep.welfare.aggregate,
                      th.alpha1.value, th.alpha2.value, th.c1.value);
        *out << line << std::flush;  // stream rows so long sweeps are resumable
    }
    return 0;
}

int cmd_simulate(const std::string& params_path, const std::string& profile_path,
                 uint64_t episodes, uint64_t seed, int workers, const std::string& trace_path,
                 const std::string& out_path) {
    ModelParams params = params_from_json_file(params_path);
    StrategyProfile profile = profile_from_json_file(profile_path);

    if (!trace_path.empty()) {
        std::ofstream trace(trace_path);
        if (!trace) throw std::runtime_error("cannot write " + trace_path);
        trace << "episode,adopted,detect1,detect2,frontrun,user0_payoff,arb1_payoff,"
                 "arb2_payoff,miner_revenue\n";
        for (uint64_t i = 0; i < episodes; ++i) {
            EpisodeRng rng(seed, i);
            EpisodeOutcome oc = run_episode(profile, params, rng);
            char line[256];
            std::snprintf(line, sizeof line, "%llu,%d,%d,%d,%d,%.9g,%.9g,%.9g,%.9g\n",
                          static_cast<unsigned long long>(i),
                          oc.block.miner_adopted_dark ? 1 : 0, oc.detection_draws[0] ? 1 : 0,
                          oc.detection_draws[1] ? 1 : 0, oc.frontrun ? 1 : 0, oc.user0_payoff,
                          oc.arb_payoff[0], oc.arb_payoff[1], oc.miner_revenue);
            trace << line;
        }
    }

    PayoffEstimates est = estimate_payoffs(profile, params, episodes, seed, workers);
    std::ifstream prof_in(profile_path);
    std::stringstream prof_buf;
    prof_buf << prof_in.rdbuf();
    json j{{"schema_version", kSchemaVersion},
           {"command", "simulate"},
           {"config",
            {{"params", params_json(params)},
             {"profile", json::parse(prof_buf.str())},
             {"episodes", episodes},
             {"seed", seed}}},
           {"estimates",
            {{"user0", estimate_json(est.user0)},
             {"arb1", estimate_json(est.arb[0])},
             {"arb2", estimate_json(est.arb[1])},
             {"miner_revenue", estimate_json(est.miner_revenue)},
             {"frontrun_frequency", estimate_json(est.frontrun_frequency)},
             {"episodes", est.episodes}}}};
    emit(j, out_path);
    return 0;
}

int cmd_verify(const std::string& params_path, uint64_t episodes, uint64_t seed, int workers,
               int grid_points, std::optional<double> abs_tol, const std::string& out_path) {
    ModelParams params = params_from_json_file(params_path);
    EquilibriumReport rep = spe(params);
    VerifyOptions opts;
    opts.episodes = episodes;
    opts.seed = seed;
    opts.workers = workers;
    opts.fee_grid_points = grid_points;
    opts.abs_tol = abs_tol;
    Certificate cert = verify_equilibrium(rep, params, opts);

    auto dev_json = [](const DeviationRecord& d) {
        return json{{"agent", d.agent}, {"deviation", d.description}, {"mean", sig9(d.mean)},
                    {"se", sig9(d.se)}, {"gain", sig9(d.gain)}};
    };
    json profitable = json::array();
    for (const DeviationRecord& d : cert.profitable) profitable.push_back(dev_json(d));
    json j{{"schema_version", kSchemaVersion},
           {"command", "verify"},
           {"config",
            {{"params", params_json(params)},
             {"episodes", episodes},
             {"seed", seed},
             {"fee_grid_points", grid_points}}},
           {"report", report_json(rep)},
           {"certificate",
            {{"passed", cert.passed},
             {"abs_tol", sig9(cert.abs_tol)},
             {"profitable_deviations", profitable},
             {"worst_deviation", dev_json(cert.worst)},
             {"miner_check_passed", cert.miner_check_passed},
             {"r_dark_up", sig9(cert.r_dark_up)},
             {"r_lit_down", sig9(cert.r_lit_down)},
             {"r_dark_star", sig9(cert.r_dark_star)},
             {"r_lit_star", sig9(cert.r_lit_star)}}}};
    emit(j, out_path);
    return cert.passed ? 0 : 1;
}

int cmd_detect(const std::string& input, const std::string& matches_path, double tolerance,
               bool denominator_all, const std::string& out_path) {
    std::vector<SwapEvent> events = swap_events_from_csv_file(input);
    std::vector<ArbitrageMatch> matches = identify_arbitrages(events, tolerance);
    std::vector<Classification> cls = classify_frontrunnable(events);
    std::vector<DailyStats> series = daily_series(events, matches, cls, !denominator_all);

    if (!matches_path.empty()) {
        std::ofstream out(matches_path);
        if (!out) throw std::runtime_error("cannot write " + matches_path);
        out << matches_to_csv(matches);
    }

    int classifiable = 0, frontrunnable = 0;
    for (const Classification& c : cls) {
        classifiable += c.classifiable;
        frontrunnable += c.frontrunnable;
    }
    json days = json::array();
    for (const DailyStats& d : series) {
        json jd{{"day", d.day},
                {"frontrunnable_count", d.frontrunnable_count},
                {"frontrun_count", d.frontrun_count},
                {"match_count", d.match_count}};
        if (d.frontrun_probability) jd["frontrun_probability"] = sig9(*d.frontrun_probability);
        if (d.dark_proportion) jd["dark_proportion"] = sig9(*d.dark_proportion);
        if (d.mean_cost_to_revenue_lit)
            jd["mean_cost_to_revenue_lit"] = sig9(*d.mean_cost_to_revenue_lit);
        if (d.mean_cost_to_revenue_dark)
            jd["mean_cost_to_revenue_dark"] = sig9(*d.mean_cost_to_revenue_dark);
        days.push_back(jd);
    }
    json j{{"schema_version", kSchemaVersion},
           {"command", "detect"},
           {"config",
            {{"input", input},
             {"relative_tolerance", tolerance},
             {"denominator", denominator_all ? "all" : "lit_only"}}},
           {"events", events.size()},
           {"matches", matches.size()},
           {"classifiable", classifiable},
           {"frontrunnable", frontrunnable},
           {"daily", days}};
    emit(j, out_path);
    return 0;
}

int cmd_frontrunnable(double r1, double r2, double v, double m, const std::string& out_path) {
    PoolState pool{r1, r2};
    VictimOrder victim{v, m};
    MaxInputResult mi = max_input(pool, victim);
    FrontrunSearch fs = best_frontrun(pool, victim);
    json j{{"schema_version", kSchemaVersion},
           {"command", "frontrunnable"},
           {"config", {{"r1", r1}, {"r2", r2}, {"v", v}, {"m", m}}},
           {"max_input",
            {{"closed_form", sig9(mi.closed_form)},
             {"closed_form_printed", sig9(mi.closed_form_printed)},
             {"bisection", sig9(mi.bisection)},
             {"agree", mi.agree}}},
           {"best_x", sig9(fs.best_x)},
           {"best_revenue", sig9(fs.best_revenue)},
           {"revenue_at_max_input", sig9(fs.revenue_at_max_input)},
           {"frontrunnable", fs.frontrunnable}};
    emit(j, out_path);
    return 0;
}

int cmd_stats(const std::string& input, double tolerance, bool denominator_all,
              const std::string& out_path, const std::string& text_path) {
    std::vector<SwapEvent> events = swap_events_from_csv_file(input);
    std::vector<ArbitrageMatch> matches = identify_arbitrages(events, tolerance);
    std::vector<Classification> cls = classify_frontrunnable(events);
    std::vector<DailyStats> series = daily_series(events, matches, cls, !denominator_all);

    // summary over unique (front, back) pairs so revenue is not repeated per victim
    std::set<std::pair<long long, int>> seen_pairs;
    std::vector<double> revenues, profits, ratios;
    for (const ArbitrageMatch& m : matches) {
        if (!seen_pairs.insert({m.front.block_number, m.front.tx_index}).second) continue;
        revenues.push_back(m.revenue);
        profits.push_back(m.profit);
        if (std::isfinite(m.cost_to_revenue)) ratios.push_back(m.cost_to_revenue);
    }
    std::vector<double> probs, dark_shares;
    for (const DailyStats& d : series) {
        if (d.frontrun_probability) probs.push_back(*d.frontrun_probability);
        if (d.dark_proportion) dark_shares.push_back(*d.dark_proportion);
    }
    std::vector<SummaryRow> rows;
    if (!revenues.empty()) rows.push_back(summarize("arb_revenue", revenues));
    if (!profits.empty()) rows.push_back(summarize("arb_profit", profits));
    if (!ratios.empty()) rows.push_back(summarize("cost_to_revenue", ratios));
    if (!probs.empty()) rows.push_back(summarize("daily_frontrun_prob", probs));
    if (!dark_shares.empty()) rows.push_back(summarize("daily_dark_share", dark_shares));

    // frontrun_i = beta * dark_proportion(day_i) + const, clustered by day
    std::map<std::string, double> dark_by_day;
    for (const DailyStats& d : series)
        if (d.dark_proportion) dark_by_day[d.day] = *d.dark_proportion;
    std::set<std::pair<long long, int>> victim_keys;
    for (const ArbitrageMatch& m : matches)
        victim_keys.insert({m.victim.block_number, m.victim.tx_index});
    std::vector<double> y, x;
    std::vector<std::string> day_labels;
    for (size_t i = 0; i < events.size(); ++i) {
        const SwapEvent& ev = events[i];
        if (!cls[i].frontrunnable) continue;
        if (ev.venue_tag && *ev.venue_tag == Venue::Dark) continue;
        auto it = dark_by_day.find(ev.day);
        if (it == dark_by_day.end()) continue;
        y.push_back(victim_keys.count({ev.block_number, ev.tx_index}) ? 1.0 : 0.0);
        x.push_back(it->second);
        day_labels.push_back(ev.day);
    }
    json regression;
    std::string regression_text;
    if (y.size() >= 3) {
        OlsSpec spec;
        spec.names = {"dark_proportion"};
        spec.columns = {x};
        spec.clusters = day_labels;
        try {
            OlsResult fit = ols_fit(y, spec);
            json coefs = json::array();
            std::ostringstream txt;
            txt << "frontrun ~ dark_proportion (cluster: day)\n";
            for (int j2 = 0; j2 < fit.k; ++j2) {
                size_t u = static_cast<size_t>(j2);
                coefs.push_back(json{{"name", fit.names[u]},
                                     {"coef", sig9(fit.coef[u])},
                                     {"se", sig9(fit.se[u])},
                                     {"cluster_se", sig9(fit.cluster_se[u])}});
                char line[160];
                std::snprintf(line, sizeof line, "  %-18s %12.6g  (se %.6g, cluster %.6g)\n",
                              fit.names[u].c_str(), fit.coef[u], fit.se[u], fit.cluster_se[u]);
                txt << line;
            }
            regression = json{{"coefficients", coefs},
                              {"r_squared", sig9(fit.r_squared)},
                              {"n", fit.n},
                              {"clusters", fit.n_clusters}};
            regression_text = txt.str();
        } catch (const RankDeficient& e) {
            regression = json{{"skipped", e.what()}};
        } catch (const std::invalid_argument& e) {
            regression = json{{"skipped", e.what()}};
        }
    } else {
        regression = json{{"skipped", "too few frontrunnable lit observations"}};
    }

    json jrows = json::array();
    for (const SummaryRow& r : rows)
        jrows.push_back(json{{"name", r.name}, {"n", r.n}, {"mean", sig9(r.mean)},
                             {"sd", sig9(r.sd)}, {"min", sig9(r.min)}, {"p10", sig9(r.p10)},
                             {"p50", sig9(r.p50)}, {"p90", sig9(r.p90)}, {"max", sig9(r.max)}});
    json j{{"schema_version", kSchemaVersion},
           {"command", "stats"},
           {"config",
            {{"input", input},
             {"relative_tolerance", tolerance},
             {"denominator", denominator_all ? "all" : "lit_only"}}},
           {"summary", jrows},
           {"regression", regression}};
    emit(j, out_path);

    std::string text = summary_table(rows) + regression_text;
    if (text_path.empty() || text_path == "-") {
        if (out_path != "-" && !out_path.empty()) std::cout << text;
    } else {
        std::ofstream out(text_path);
        if (!out) throw std::runtime_error("cannot write " + text_path);
        out << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dark-venue adoption game solver, simulator, and swap analytics"};
    app.require_subcommand(1);

    std::string params_path, profile_path, grid, out_path = "-", trace_path, matches_path;
    std::string input_path, text_path;
    uint64_t episodes = 100000, seed = 0;
    int workers = 1, grid_points = 64;
    double tolerance = 0.0, abs_tol_val = 0.0;
    bool with_transfer = false, denominator_all = false, abs_tol_set = false;
    double r1 = 0, r2 = 0, v = 0, m = 0;

    CLI::App* eq = app.add_subcommand("equilibrium", "solve thresholds and the adoption SPE");
    eq->add_option("--params", params_path, "model params JSON")->required();
    eq->add_option("--grid", grid, "sweep spec name=start:stop:step (CSV output)");
    eq->add_option("--out", out_path, "output path (default stdout)");
    eq->add_flag("--transfer", with_transfer, "apply the user0-to-miner transfer");

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo payoffs for a strategy profile");
    sim->add_option("--params", params_path, "model params JSON")->required();
    sim->add_option("--profile", profile_path, "strategy profile JSON")->required();
    sim->add_option("--episodes", episodes, "episode count")->required();
    sim->add_option("--seed", seed, "RNG seed")->required();
    sim->add_option("--workers", workers, "worker threads");
    sim->add_option("--trace", trace_path, "per-episode CSV output");
    sim->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* ver = app.add_subcommand("verify", "simulate deviations against the solved SPE");
    ver->add_option("--params", params_path, "model params JSON")->required();
    ver->add_option("--episodes", episodes, "episodes per deviation");
    ver->add_option("--seed", seed, "RNG seed")->required();
    ver->add_option("--workers", workers, "worker threads");
    ver->add_option("--fee-grid-points", grid_points, "fee deviation grid size");
    ver->add_option("--abs-tol", abs_tol_val, "absolute deviation tolerance")
        ->each([&](const std::string&) { abs_tol_set = true; });
    ver->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* det = app.add_subcommand("detect", "identify insertion arbitrages in swap CSV");
    det->add_option("--input", input_path, "swap events CSV")->required();
    det->add_option("--matches", matches_path, "matches CSV output");
    det->add_option("--tolerance", tolerance, "relative amount-match tolerance (default exact)");
    det->add_flag("--denominator-all", denominator_all,
                  "count dark submissions in the frontrun-probability denominator");
    det->add_option("--out", out_path, "summary JSON path (default stdout)");

    CLI::App* fr = app.add_subcommand("frontrunnable", "single-shot AMM frontrun analysis");
    fr->add_option("r1", r1, "input-token reserve")->required();
    fr->add_option("r2", r2, "output-token reserve")->required();
    fr->add_option("v", v, "victim input amount")->required();
    fr->add_option("m", m, "victim minimum output")->required();
    fr->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* st = app.add_subcommand("stats", "summary and regression tables from swap CSV");
    st->add_option("--input", input_path, "swap events CSV")->required();
    st->add_option("--tolerance", tolerance, "relative amount-match tolerance (default exact)");
    st->add_flag("--denominator-all", denominator_all,
                 "count dark submissions in the frontrun-probability denominator");
    st->add_option("--out", out_path, "JSON output path (default stdout)");
    st->add_option("--text", text_path, "aligned-text output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the offending flag
        return 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (eq->parsed()) return cmd_equilibrium(params_path, grid, out_path, with_transfer);
        if (sim->parsed())
            return cmd_simulate(params_path, profile_path, episodes, seed, workers, trace_path,
                                out_path);
        if (ver->parsed())
            return cmd_verify(params_path, episodes, seed, workers, grid_points,
                              abs_tol_set ? std::optional<double>(abs_tol_val) : std::nullopt,
                              out_path);
        if (det->parsed())
            return cmd_detect(input_path, matches_path, tolerance, denominator_all, out_path);
        if (fr->parsed()) return cmd_frontrunnable(r1, r2, v, m, out_path);
        if (st->parsed())
            return cmd_stats(input_path, tolerance, denominator_all, out_path, text_path);
    } catch (const std::exception& e) {
        return domain_error(cmd, e);
    }
    return 2;
}
