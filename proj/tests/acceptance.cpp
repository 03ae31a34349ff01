// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion is self-contained and prints the evidence
// it gathered (tolerances are pinned inline).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "fixtures.hpp"
#include "mevsim/amm.hpp"
#include "mevsim/detector.hpp"
#include "mevsim/equilibrium.hpp"
#include "mevsim/mixed_bid.hpp"
#include "mevsim/ols.hpp"
#include "mevsim/sim.hpp"

using namespace mevsim;

namespace {

int n_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4 : static_cast<int>(hw);
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
};

double density_fn(double g, const ModelParams& p) { return mixed_strategy_density(g, p); }

// ---- criterion 1: mixed-strategy normalization and indifference ----------

Outcome criterion1() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    int points = 0;
    double worst_norm = 0, worst_indiff = 0;
    for (double p : {0.3, 0.5, 0.7})
        for (double c : {1.8, 2.2, 3.0})
            for (double v : {0.9, 1.0, 1.1}) {
                ModelParams par = fixtures::matrix_params();
                par.detect_prob = p;
                par.arb_profit = c;
                par.user_valuations[1] = v;  // v[B-2] for B = 4
                auto s = mixed_fee_support(par);
                double mass = integrate(density_fn, par, s.lo, s.hi, 1e-12);
                worst_norm = std::max(worst_norm, std::fabs(mass - 1.0));
                const double target = (1.0 - p) * (c - v);
                for (int i = 0; i <= 20; ++i) {
                    double b = s.lo + (s.hi - s.lo) * i / 20.0;
                    double payoff =
                        (1.0 - p) * (c - b) + p * mixed_strategy_cdf(b, par) * (c - b);
                    worst_indiff = std::max(worst_indiff, std::fabs(payoff - target));
                }
                ++points;
            }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.pass = worst_norm <= 1e-9 && worst_indiff <= 1e-9 && secs < 1.0;
    o.detail << points << " grid points, worst normalization error " << worst_norm
             << ", worst indifference error " << worst_indiff << ", " << secs << " s";
    return o;
}

// ---- criterion 2: Monte Carlo vs analytic matrix cells -------------------

Outcome criterion2() {
    Outcome o;
    const uint64_t n = 1000000;
    const int workers = n_workers();
    int checks = 0, ok = 0;
    double worst_z = 0;
    uint64_t seed = 1000;
    for (double alpha : {0.2, 0.5, 0.8})
        for (double p : {0.3, 0.5, 0.7})
            for (double c : {2.0, 2.6, 3.2}) {
                ModelParams par = fixtures::fine_params();
                par.detect_prob = p;
                par.arb_profit = c;
                PayoffMatrix m = arb_payoff_matrix(alpha, par);
                const std::tuple<Venue, Venue> cells[] = {
                    {Venue::Dark, Venue::Dark}, {Venue::Lit, Venue::Lit},
                    {Venue::Both, Venue::Both}};
                for (auto [v1, v2] : cells) {
                    StrategyProfile prof;
                    prof.alpha = alpha;
                    prof.user0_venue = Venue::Lit;
                    prof.arb_venue = {v1, v2};
                    auto est = estimate_payoffs(prof, par, n, seed++, workers);
                    const double truth[2] = {m.at(v1, v2).a1, m.at(v1, v2).a2};
                    for (int j = 0; j < 2; ++j) {
                        double se = *est.arb[static_cast<size_t>(j)].se;
                        double z = std::fabs(est.arb[static_cast<size_t>(j)].mean - truth[j]) /
                                   (se > 0 ? se : 1e-300);
                        worst_z = std::max(worst_z, z);
                        ++checks;
                        if (z <= 3.0) ++ok;
                    }
                }
            }
    o.pass = ok == checks;
    o.detail << ok << "/" << checks << " cell comparisons within 3 SE at N=1e6 (worst z = "
             << worst_z << ")";
    return o;
}

// ---- criterion 3: adoption regimes and best-response certificates --------

Outcome criterion3() {
    Outcome o;
    const int workers = n_workers();

    ModelParams full = fixtures::unit_params();
    full.arb_profit = 13.0;  // above c1 = 12
    EquilibriumReport rf = spe(full);
    bool full_ok = rf.regime == AdoptionRegime::FullAdoption && rf.alpha_star == 1.0;
    VerifyOptions opts;
    opts.episodes = 100000;
    opts.seed = 11;
    opts.workers = workers;
    Certificate cf = verify_equilibrium(rf, full, opts);

    ModelParams part = fixtures::main_params();
    EquilibriumReport rp = spe(part);
    bool part_ok = rp.regime == AdoptionRegime::PartialAdoption && rp.alpha_star < 1.0 &&
                   rp.user0_venue == Venue::Lit;
    opts.seed = 12;
    Certificate cp = verify_equilibrium(rp, part, opts);

    o.pass = full_ok && cf.passed && part_ok && cp.passed;
    o.detail << "full adoption: " << (full_ok ? "ok" : "WRONG") << ", certificate "
             << (cf.passed ? "passed" : "FAILED") << " (worst gain " << cf.worst.gain
             << ", tol max(3SE," << cf.abs_tol << ")); partial: "
             << (part_ok ? "ok" : "WRONG") << " alpha*=" << rp.alpha_star
             << ", certificate " << (cp.passed ? "passed" : "FAILED") << " (worst gain "
             << cp.worst.gain << ", tol max(3SE," << cp.abs_tol << "))";
    return o;
}

// ---- criterion 4: inclusion-fee comparisons at random parameter points ---

Outcome criterion4() {
    Outcome o;
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> up_hi(0.25, 0.75), ul_hi(0.35, 0.9), uf(0.0, 1.0);
    // low-profit draws stay near the reference economy so the selected
    // equilibrium is the partial-adoption one the fee expressions describe
    std::uniform_real_distribution<double> up_lo(0.45, 0.55), ul_lo(0.62, 0.72);
    int ok = 0, total = 0;
    for (int i = 0; i < 10; ++i) {
        ModelParams par = fixtures::main_params();
        const bool high = i % 2 == 0;
        if (high) {
            par.detect_prob = up_hi(rng);
            par.auction_continuation = ul_hi(rng);
            ThresholdSet th0 = thresholds(par);
            par.arb_profit = th0.c1.value * (1.05 + 0.4 * uf(rng));
        } else {
            par.detect_prob = up_lo(rng);
            par.auction_continuation = ul_lo(rng);
        }
        const double c1 = thresholds(par).c1.value;
        MatrixCalibration cal = mechanics_calibration(par);
        TransactionCostReport tc = transaction_costs(par, cal);
        ++total;
        bool point_ok;
        if (par.arb_profit > c1) {
            point_ok = tc.min_fee_before == par.v_b() && tc.min_fee_after == par.v_bm1() &&
                       tc.total_fee_before == par.block_capacity * par.v_b() &&
                       tc.total_fee_after == par.block_capacity * par.v_bm1() &&
                       tc.min_fee_after >= tc.min_fee_before &&
                       tc.total_fee_after >= tc.total_fee_before;
        } else {
            const double q = 1.0 - (1.0 - par.detect_prob) * (1.0 - par.detect_prob);
            const double before = (par.block_capacity - 1) * par.v_bm2() +
                                  (1.0 - par.detect_prob) * (1.0 - par.detect_prob) *
                                      par.v_bm1() +
                                  q * par.lit_fee_multiplier * par.v_bm2();
            point_ok = tc.min_fee_before ==
                           fee_floor(FeeScenario::FrontrunnableWithArbSpace, par) &&
                       tc.total_fee_before == before &&
                       tc.min_fee_after >= tc.min_fee_before - 1e-12 &&
                       tc.total_fee_after >= tc.total_fee_before - 1e-9;
        }
        if (point_ok) ++ok;
    }
    o.pass = ok == total;
    o.detail << ok << "/" << total
             << " random parameter points satisfy the exact fee formulas and the "
                "with-venue >= without-venue comparisons";
    return o;
}

// ---- criterion 5: welfare identities and the 100-point sweep -------------

Outcome criterion5() {
    Outcome o;
    ModelParams full = fixtures::main_params();
    full.arb_profit = 17.0;  // above c1 = 16: full adoption
    EquilibriumReport rf = spe(full);
    double top_sum = full.frontrunnable_valuation;
    for (int i = 1; i <= full.block_capacity - 1; ++i) top_sum += full.v(i);
    bool full_ok = std::fabs(rf.welfare.aggregate - top_sum) <= 1e-9;

    ModelParams part = fixtures::main_params();
    EquilibriumReport rp = spe(part);
    bool part_ok = rp.welfare.aggregate < top_sum - 1e-9;

    int sweep_ok = 0, sweep_total = 0;
    for (double c : {8.5, 10.0, 12.0, 15.0, 18.0})
        for (int i = 1; i <= 20; ++i) {
            ModelParams par = fixtures::main_params();
            par.arb_profit = c;
            par.detect_prob = 0.04 + 0.045 * i;
            EquilibriumReport rep = spe(par);
            WelfareBreakdown with = welfare_report(rep, par, true);
            WelfareBreakdown without = welfare_report(rep, par, false);
            ++sweep_total;
            if (with.aggregate >= without.aggregate - 1e-9) ++sweep_ok;
        }
    o.pass = full_ok && part_ok && sweep_ok == sweep_total;
    o.detail << "full-adoption aggregate " << rf.welfare.aggregate << " vs top-slot sum "
             << top_sum << (full_ok ? " (exact)" : " (MISMATCH)")
             << "; partial aggregate " << rp.welfare.aggregate
             << (part_ok ? " strictly below" : " NOT below") << "; sweep " << sweep_ok << "/"
             << sweep_total << " points never lose welfare";
    return o;
}

// ---- criterion 6: the committed transfer flips adoption ------------------

Outcome criterion6() {
    Outcome o;
    int ok = 0, total = 0;
    for (double p : {0.45, 0.5, 0.6}) {
        ModelParams par = fixtures::main_params();  // c = 9 < c1
        par.detect_prob = p;
        EquilibriumReport base = spe(par);
        EquilibriumReport t = apply_transfer(par);
        const double q = 1.0 - (1.0 - p) * (1.0 - p);
        ++total;
        if (base.regime == AdoptionRegime::PartialAdoption &&
            t.regime == AdoptionRegime::FullAdoption &&
            std::fabs(t.transfer_theta - q * par.arb_profit) <= 1e-12 &&
            t.welfare.user0 >= base.welfare.user0 - 1e-9 &&
            t.welfare.miners > base.welfare.miners)
            ++ok;
    }
    ModelParams par = fixtures::main_params();
    EquilibriumReport t = apply_transfer(par);
    VerifyOptions opts;
    opts.episodes = 100000;
    opts.seed = 66;
    opts.workers = n_workers();
    Certificate cert = verify_equilibrium(t, par, opts);
    o.pass = ok == total && cert.passed;
    o.detail << ok << "/" << total
             << " low-profit fixtures flip to full adoption with weakly better user and "
                "strictly better miner payoffs; certificate "
             << (cert.passed ? "passed" : "FAILED") << " (worst gain " << cert.worst.gain
             << ")";
    return o;
}

// ---- criterion 7: threshold sensitivities in the detection rate ----------

Outcome criterion7() {
    Outcome o;
    int ok = 0, total = 0;
    std::ostringstream lambda_log;
    for (double p : {0.3, 0.4, 0.5, 0.6, 0.7}) {
        ModelParams par = fixtures::main_params();
        par.detect_prob = p;
        auto sens = threshold_sensitivities(par, 1e-5);
        ++total;
        for (const auto& s : sens) {
            if (s.name == "alpha2") {
                double expect = 1.0 / ((2.0 - p) * (2.0 - p));
                if (std::fabs(s.derivative - expect) <= 1e-5 * expect && s.sign == 1) ++ok;
            }
            if (s.name.rfind("lambda", 0) == 0 && s.exists && s.sign >= 0)
                lambda_log << " " << s.name << "@p=" << p << " sign " << s.sign << ";";
        }
    }
    std::string lam = lambda_log.str();
    o.pass = ok == total;
    o.detail << ok << "/" << total << " points match d(alpha2)/dp = 1/(2-p)^2 to 1e-5";
    if (lam.empty())
        o.detail << "; every existing lambda threshold falls in p";
    else
        o.detail << "; non-negative lambda sensitivities (documented):" << lam;
    return o;
}

// ---- criterion 8: frontrun size bound, closed form vs bisection ----------

Outcome criterion8() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> ue(2.0, 8.0), uv(-5.0, -1.3), um(0.3, 0.999);
    const int n = 10000;
    int disagree = 0, printed_off = 0, variant_diff = 0;
    for (int i = 0; i < n; ++i) {
        PoolState pool{std::pow(10.0, ue(rng)), std::pow(10.0, ue(rng))};
        double v = pool.reserve_in * std::pow(10.0, uv(rng));
        double m = swap_output(pool, v) * um(rng);
        MaxInputResult r = max_input(pool, {v, m});
        if (!r.agree) ++disagree;
        if (std::fabs(r.closed_form_printed - r.bisection) >
            1e-6 * std::max(1.0, std::fabs(r.bisection)))
            ++printed_off;
        // denominator variant: does the fee-adjusted reserve admit the exact
        // root where the verbatim form does?
        if (victim_constraint(pool, {v, m}, r.bisection,
                              ConstraintVariant::FeeAdjustedReserve) !=
            victim_constraint(pool, {v, m}, r.bisection, ConstraintVariant::PaperVerbatim))
            ++variant_diff;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.pass = disagree == 0 && secs < 10.0;
    o.detail << n << " random pools: exact closed form vs bisection disagreements "
             << disagree << " (rel 1e-6); rounded-constant variant off in " << printed_off
             << " cases; denominator variants disagree at the root in " << variant_diff
             << " cases; " << secs << " s";
    return o;
}

// ---- criterion 9: detector precision and recall on a planted corpus ------

Outcome criterion9() {
    Outcome o;
    std::vector<SwapEvent> events;
    events.reserve(100000);
    std::set<std::tuple<long long, int, int, int>> planted;  // block, front, victim, back
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> n_victims(1, 3);

    auto ev = [](long long block, int idx, const std::string& pool, SwapDirection dir,
                 double in, double out) {
        SwapEvent e;
        e.block_number = block;
        e.tx_index = idx;
        e.pool_id = pool;
        e.direction = dir;
        e.input_amount = in;
        e.output_amount = out;
        e.day = "2021-06-0" + std::to_string(1 + block % 9);
        return e;
    };

    // 1000 sandwiches, one per (block, pool) group, 1-3 victims each
    long long serial = 0;
    for (int s = 0; s < 1000; ++s) {
        long long block = s;
        std::string pool = "sand" + std::to_string(s);
        int nv = n_victims(rng);
        double bridge = 100.0 + 0.001 * s;  // front output == back input, exact
        events.push_back(ev(block, 0, pool, SwapDirection::InToOut, 50.0, bridge));
        for (int k = 0; k < nv; ++k) {
            events.push_back(
                ev(block, 1 + k, pool, SwapDirection::InToOut, 7.0 + k, 6.5 + k));
            planted.insert({block, 0, 1 + k, 1 + nv});
        }
        events.push_back(ev(block, 1 + nv, pool, SwapDirection::OutToIn, bridge,
                            51.0 + 0.001 * s));
    }

    // per-condition distractors in their own groups, none of which may match
    while (events.size() < 100000) {
        // even base blocks keep the cross-block distractor's +1 block unused
        long long block = 2000 + 2 * serial;
        std::string pool = "d" + std::to_string(serial);
        double a = 200.0 + 0.0001 * static_cast<double>(serial);
        switch (serial % 4) {
            case 0:  // opposite legs, no victim between
                events.push_back(ev(block, 0, pool, SwapDirection::InToOut, 10, a));
                events.push_back(ev(block, 1, pool, SwapDirection::OutToIn, a, 10.5));
                break;
            case 1:  // amounts off by one part in a thousand
                events.push_back(ev(block, 0, pool, SwapDirection::InToOut, 10, a));
                events.push_back(ev(block, 1, pool, SwapDirection::InToOut, 3, 2.9));
                events.push_back(ev(block, 2, pool, SwapDirection::OutToIn, a + 0.2, 10.5));
                break;
            case 2:  // same direction throughout
                events.push_back(ev(block, 0, pool, SwapDirection::InToOut, 10, a));
                events.push_back(ev(block, 1, pool, SwapDirection::InToOut, 3, 2.9));
                events.push_back(ev(block, 2, pool, SwapDirection::InToOut, a, 10.5));
                break;
            default:  // legs split across blocks
                events.push_back(ev(block, 0, pool, SwapDirection::InToOut, 10, a));
                events.push_back(ev(block, 1, pool, SwapDirection::InToOut, 3, 2.9));
                events.push_back(ev(block + 1, 0, pool, SwapDirection::OutToIn, a, 10.5));
                break;
        }
        ++serial;
    }
    events.resize(100000);

    auto matches = identify_arbitrages(events);
    size_t true_pos = 0, false_pos = 0;
    for (const auto& m : matches) {
        auto key = std::make_tuple(m.front.block_number, m.front.tx_index, m.victim.tx_index,
                                   m.back.tx_index);
        if (planted.count(key))
            ++true_pos;
        else
            ++false_pos;
    }
    double precision = matches.empty() ? 0.0
                                       : static_cast<double>(true_pos) /
                                             static_cast<double>(matches.size());
    double recall = static_cast<double>(true_pos) / static_cast<double>(planted.size());
    o.pass = false_pos == 0 && true_pos == planted.size();
    o.detail << events.size() << " events, " << planted.size() << " planted insertions: precision "
             << precision << ", recall " << recall << " (" << false_pos << " false positives)";
    return o;
}

// ---- criterion 10: determinism of the stochastic estimators --------------

Outcome criterion10() {
    Outcome o;
    ModelParams par = fixtures::main_params();
    StrategyProfile prof;
    prof.alpha = 0.4;
    prof.user0_venue = Venue::Lit;
    prof.arb_venue = {Venue::Both, Venue::Both};
    auto a = estimate_payoffs(prof, par, 100000, 7, 1);
    auto b = estimate_payoffs(prof, par, 100000, 7, n_workers());
    auto c = estimate_payoffs(prof, par, 100000, 7, 3);
    bool same = a.user0.mean == b.user0.mean && a.user0.mean == c.user0.mean &&
                a.arb[0].mean == b.arb[0].mean && a.arb[1].mean == b.arb[1].mean &&
                a.miner_revenue.mean == b.miner_revenue.mean &&
                a.frontrun_frequency.mean == b.frontrun_frequency.mean &&
                *a.user0.se == *b.user0.se;
    auto d = estimate_payoffs(prof, par, 100000, 8, 1);
    bool seeded = a.user0.mean != d.user0.mean;
    o.pass = same && seeded;
    o.detail << "estimates bit-identical across reruns and worker counts {1,3,"
             << n_workers() << "}: " << (same ? "yes" : "NO")
             << "; a different seed moves them: " << (seeded ? "yes" : "NO");
    return o;
}

// ---- criterion 11: regression engine against closed-form oracles ---------

Outcome criterion11() {
    Outcome o;
    bool exact_ok;
    {
        std::vector<double> x1{0, 1, 2, 3, 4, 5}, x2{1, 0, 2, 1, 3, 2}, y;
        for (size_t i = 0; i < x1.size(); ++i) y.push_back(2 * x1[i] - 3 * x2[i] + 5);
        OlsSpec spec;
        spec.names = {"x1", "x2"};
        spec.columns = {x1, x2};
        OlsResult fit = ols_fit(y, spec);
        exact_ok = std::fabs(fit.coef[0] - 2.0) <= 1e-10 &&
                   std::fabs(fit.coef[1] + 3.0) <= 1e-10 &&
                   std::fabs(fit.coef[2] - 5.0) <= 1e-10;
    }

    bool synth_ok;
    {
        std::mt19937_64 rng(111);
        std::normal_distribution<double> noise(0.0, 0.7);
        std::uniform_real_distribution<double> ux(0.0, 5.0);
        std::vector<double> x, y;
        for (int i = 0; i < 20000; ++i) {
            x.push_back(ux(rng));
            y.push_back(1.5 * x.back() - 2.0 + noise(rng));
        }
        OlsSpec spec;
        spec.names = {"x"};
        spec.columns = {x};
        OlsResult fit = ols_fit(y, spec);
        synth_ok = std::fabs(fit.coef[0] - 1.5) <= 3.0 * fit.se[0] &&
                   std::fabs(fit.coef[1] + 2.0) <= 3.0 * fit.se[1];
    }

    bool cluster_ok = true;
    double worst = 0;
    {
        const int n = 50, g = 5, k = 2;
        std::mt19937_64 rng(2024);
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<double> x, y;
        std::vector<std::string> cl;
        for (int i = 0; i < n; ++i) {
            double xv = (i % 7) + 0.1 * (i % 3);
            x.push_back(xv);
            cl.push_back("g" + std::to_string(i % g));
            y.push_back(0.5 * xv + noise(rng) + 0.3 * (i % g));
        }
        OlsSpec spec;
        spec.names = {"x"};
        spec.columns = {x};
        spec.clusters = cl;
        OlsResult fit = ols_fit(y, spec);

        double xtx[2][2] = {{0, 0}, {0, 0}};
        for (int i = 0; i < n; ++i) {
            double xi[2] = {x[static_cast<size_t>(i)], 1.0};
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) xtx[a][b] += xi[a] * xi[b];
        }
        double det = xtx[0][0] * xtx[1][1] - xtx[0][1] * xtx[1][0];
        double inv[2][2] = {{xtx[1][1] / det, -xtx[0][1] / det},
                            {-xtx[1][0] / det, xtx[0][0] / det}};
        double meat[2][2] = {{0, 0}, {0, 0}};
        for (int gi = 0; gi < g; ++gi) {
            double s[2] = {0, 0};
            for (int i = gi; i < n; i += g) {
                double xi[2] = {x[static_cast<size_t>(i)], 1.0};
                double resid = y[static_cast<size_t>(i)] - fit.coef[0] * xi[0] - fit.coef[1];
                s[0] += xi[0] * resid;
                s[1] += xi[1] * resid;
            }
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) meat[a][b] += s[a] * s[b];
        }
        double adj =
            (static_cast<double>(g) / (g - 1)) * (static_cast<double>(n - 1) / (n - k));
        for (int a = 0; a < k; ++a) {
            double var = 0;
            for (int r = 0; r < k; ++r)
                for (int s2 = 0; s2 < k; ++s2) var += inv[a][r] * meat[r][s2] * inv[s2][a];
            double diff = std::fabs(fit.cluster_se[static_cast<size_t>(a)] -
                                    std::sqrt(var * adj));
            worst = std::max(worst, diff);
            if (diff > 1e-9) cluster_ok = false;
        }
    }
    o.pass = exact_ok && synth_ok && cluster_ok;
    o.detail << "exact fit to 1e-10: " << (exact_ok ? "ok" : "FAIL")
             << "; synthetic recovery within 3 SE: " << (synth_ok ? "ok" : "FAIL")
             << "; cluster SEs vs sandwich oracle (worst |diff| " << worst
             << "): " << (cluster_ok ? "ok" : "FAIL");
    return o;
}

}  // namespace

// Runs every criterion by default; an optional argument like "4,6,9" restricts
// the run to those ids (development convenience, ctest passes no arguments).
int main(int argc, char** argv) {
    std::set<int> only;
    if (argc > 1) {
        std::stringstream ss(argv[1]);
        std::string tok;
        while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
    }
    struct Entry {
        int id;
        const char* label;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {1, "mixed-strategy normalization and indifference", criterion1},
        {2, "Monte Carlo vs analytic payoff cells", criterion2},
        {3, "adoption regimes and equilibrium certificates", criterion3},
        {4, "inclusion-fee comparisons at random points", criterion4},
        {5, "welfare identities and monotone sweep", criterion5},
        {6, "committed transfer flips adoption", criterion6},
        {7, "threshold sensitivities in the detection rate", criterion7},
        {8, "frontrun size bound closed form vs bisection", criterion8},
        {9, "detector precision and recall on planted corpus", criterion9},
        {10, "deterministic seeded estimation", criterion10},
        {11, "regression engine vs closed-form oracles", criterion11},
    };
    int failures = 0;
    for (const auto& e : entries) {
        if (!only.empty() && !only.count(e.id)) continue;
        Outcome o = e.fn();
        std::cout << "[criterion " << e.id << "] " << (o.pass ? "PASS" : "FAIL") << " — "
                  << e.label << ": " << o.detail.str() << std::endl;
        if (!o.pass) ++failures;
    }
    if (failures) std::cout << failures << " criteria failed" << std::endl;
    return failures == 0 ? 0 : 1;
}
