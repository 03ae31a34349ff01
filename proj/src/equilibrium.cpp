#include "mevsim/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace mevsim {

namespace {

double q_of(const ModelParams& p) {
    return 1.0 - (1.0 - p.detect_prob) * (1.0 - p.detect_prob);
}

bool both_both_is_ne(double alpha, const ModelParams& p, const MatrixCalibration& cal) {
    auto eqs = pure_nash_at(alpha, p, cal);
    return std::find(eqs.begin(), eqs.end(),
                     std::make_pair(Venue::Both, Venue::Both)) != eqs.end();
}

// Bisection for a monotone predicate: largest x in [0,1] with pred(x) true,
// assuming pred true on a prefix.
double prefix_boundary(const std::function<bool(double)>& pred) {
    if (!pred(0.0)) return 0.0;
    if (pred(1.0)) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
        double mid = 0.5 * (lo + hi);
        (pred(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Root of increasing function f on [lo,hi]; nullopt when not bracketed.
std::optional<double> bracketed_root(const std::function<double(double)>& f, double lo,
                                     double hi) {
    double flo = f(lo), fhi = f(hi);
    if (flo > 0.0 || fhi < 0.0) return std::nullopt;
    for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) <= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ThresholdSet thresholds(const ModelParams& p, const MatrixCalibration& cal) {
    require_valid(p);
    const double prob = p.detect_prob;
    const double q = q_of(p);
    const double c = p.arb_profit;
    const double v0 = p.frontrunnable_valuation;
    const double g = p.lit_fee_multiplier;

    ThresholdSet th;
    th.alpha2 = {1.0 / (2.0 - prob), Method::ClosedForm};
    th.c1 = {(v0 - p.v_bm2()) / q, Method::ClosedForm};
    th.theta = {q * c, Method::ClosedForm};

    // alpha1: numeric boundary of the Both/Both region. The stated closed
    // form is kept as a cross-check only: evaluated directly it can exceed
    // alpha2, contradicting the stated ordering.
    th.alpha1.method = Method::NumericRoot;
    th.alpha1.value =
        prefix_boundary([&](double a) { return both_both_is_ne(a, p, cal); });
    const double cf_alpha1 = (prob * g - 2.0 * g) / (prob * g + prob - 2.0 * g - 1.0);
    th.alpha1.closed_form_alt = cf_alpha1;
    th.alpha1.discrepancy = std::fabs(cf_alpha1 - th.alpha1.value) > 1e-6;

    // user0 indifference points, one per arbitrageur regime; the dark payoff
    // minus the lit payoff is increasing in alpha within a regime.
    auto root_in = [&](ArbRegime reg, double lo, double hi) {
        return bracketed_root(
            [&](double a) {
                return user0_payoff(Venue::Dark, a, p, reg) -
                       user0_payoff(Venue::Lit, a, p, reg);
            },
            lo, hi);
    };
    auto fill = [](ThresholdValue& tv, std::optional<double> r) {
        tv.method = Method::NumericRoot;
        tv.exists = r.has_value();
        tv.value = r.value_or(0.0);
    };
    fill(th.lambda1, root_in(ArbRegime::BothBoth, 0.0, th.alpha1.value));
    fill(th.lambda2, root_in(ArbRegime::BothDark, th.alpha1.value, th.alpha2.value));
    fill(th.lambda3, root_in(ArbRegime::DarkDark, th.alpha2.value, 1.0));

    // Stated closed form for the Dark/Dark-regime threshold; its
    // numerator does not match the indifference equation two lines above it,
    // so the numeric root is authoritative and disagreement is surfaced.
    const double vb1 = p.v_bm1(), vb2 = p.v_bm2();
    const double denom = -c * prob * prob + 2.0 * c * prob + vb1 * prob * prob -
                         2.0 * vb1 * prob - vb1 - vb2 * prob * prob + 2.0 * vb2 * prob + v0;
    if (denom != 0.0) {
        th.lambda3.closed_form_alt = (v0 - vb1) / denom;
        if (th.lambda3.exists)
            th.lambda3.discrepancy =
                std::fabs(*th.lambda3.closed_form_alt - th.lambda3.value) > 1e-6;
    }
    return th;
}

ThresholdSet thresholds(const ModelParams& p) {
    return thresholds(p, mechanics_calibration(p));
}

ArbRegime regime_at(double alpha, const ThresholdSet& th) {
    if (alpha <= th.alpha1.value) return ArbRegime::BothBoth;
    if (alpha <= th.alpha2.value) return ArbRegime::BothDark;
    return ArbRegime::DarkDark;
}

double user0_payoff(Venue venue, double alpha, const ModelParams& p, ArbRegime regime) {
    require_valid(p);
    const double q = q_of(p);
    const double prob = p.detect_prob;
    const double c = p.arb_profit;
    const double v0 = p.frontrunnable_valuation;
    switch (venue) {
        case Venue::None:
            return 0.0;
        case Venue::Dark:
            return alpha * (v0 - p.v_bm1());
        case Venue::Lit: {
            const double base = v0 - p.v_bm2();
            switch (regime) {
                case ArbRegime::BothBoth:
                    // frontrun whenever either arbitrageur detects; the lit
                    // auction executes the winner even without adoption
                    return base - q * c;
                case ArbRegime::BothDark:
                    // the dark-only arbitrageur needs an adopting miner
                    return base - c * (prob + (1.0 - prob) * prob * alpha);
                case ArbRegime::DarkDark:
                    return base - alpha * q * c;
            }
            return 0.0;
        }
        default:
            throw std::invalid_argument("users choose from {Lit, Dark, None}");
    }
}

namespace {

// user0's venue at a given adoption rate; indifference stays Lit, and a user
// with nothing to gain in either venue abstains.
Venue user0_best_venue(double alpha, const ModelParams& p, const ThresholdSet& th) {
    ArbRegime reg = regime_at(alpha, th);
    double lit = user0_payoff(Venue::Lit, alpha, p, reg);
    double dark = user0_payoff(Venue::Dark, alpha, p, reg);
    double best = std::max({lit, dark, 0.0});
    // wider than the payoff residual a 1e-10 alpha-root leaves (~1e-9), so
    // the indifference thresholds themselves classify as ties
    const double tol = 1e-7 * (std::fabs(p.frontrunnable_valuation) + 1.0);
    if (lit >= best - tol) return Venue::Lit;
    if (dark > tol) return Venue::Dark;
    return Venue::None;
}

}  // namespace

MinerRevenues miner_revenues(double alpha, const ModelParams& p, const ThresholdSet& th) {
    const int B = p.block_capacity;
    const double v = p.v_bm2(), vb1 = p.v_bm1(), vb = p.v_b();
    const double q = q_of(p);
    const double prob = p.detect_prob;
    const double c = p.arb_profit;
    const double gv = p.lit_fee_multiplier * v;
    const double base = (B - 1) * v + (1.0 - prob) * (1.0 - prob) * vb1;

    switch (user0_best_venue(alpha, p, th)) {
        case Venue::None:
            return {B * vb, B * vb};
        case Venue::Dark:
            return {B * vb1, (B - 1) * vb1 + vb};
        case Venue::Lit:
            break;
        default:
            break;
    }
    MinerRevenues r;
    switch (regime_at(alpha, th)) {
        case ArbRegime::BothBoth:
            r.r_dark = base + q * c;
            r.r_lit = base + q * gv;
            break;
        case ArbRegime::BothDark:
            r.r_dark = base + q * (c - v);
            r.r_lit = base + q * gv;
            break;
        case ArbRegime::DarkDark:
            r.r_dark = base + q * c - 2.0 * prob * (1.0 - prob) * (c - v);
            r.r_lit = (B - 1) * v + vb1;
            break;
    }
    return r;
}

namespace {

double frontrun_probability(double alpha, const ModelParams& p, ArbRegime reg) {
    const double prob = p.detect_prob;
    const double q = q_of(p);
    switch (reg) {
        case ArbRegime::BothBoth: return q;
        case ArbRegime::BothDark: return prob + (1.0 - prob) * prob * alpha;
        case ArbRegime::DarkDark: return alpha * q;
    }
    return 0.0;
}

std::pair<Venue, Venue> regime_venues(ArbRegime reg) {
    switch (reg) {
        case ArbRegime::BothBoth: return {Venue::Both, Venue::Both};
        case ArbRegime::BothDark: return {Venue::Both, Venue::Dark};
        case ArbRegime::DarkDark: return {Venue::Dark, Venue::Dark};
    }
    return {Venue::Both, Venue::Both};
}

double sum_valuations(const ModelParams& p, int from, int to) {  // inclusive user range
    double s = 0;
    for (int i = from; i <= to; ++i) s += p.v(i);
    return s;
}

}  // namespace

EquilibriumReport spe(const ModelParams& p, const MatrixCalibration& cal) {
    require_valid(p);
    const ThresholdSet th = thresholds(p, cal);
    EquilibriumReport rep;

    if (p.arb_profit > th.c1.value) {
        rep.regime = AdoptionRegime::FullAdoption;
        rep.alpha_star = 1.0;
        rep.user0_venue = Venue::Dark;
        rep.arb_regime = ArbRegime::DarkDark;
        rep.arb_venues = regime_venues(rep.arb_regime);
        rep.revenues = miner_revenues(1.0, p, th);
        rep.welfare = welfare_report(rep, p, true);
        return rep;
    }

    std::vector<double> candidates;
    if (th.lambda1.exists) candidates.push_back(th.lambda1.value);
    if (th.lambda2.exists) candidates.push_back(th.lambda2.value);
    if (th.lambda3.exists) candidates.push_back(th.lambda3.value);
    candidates.push_back(1.0);

    double best_alpha = 1.0, best_m = -1.0;
    for (double a : candidates) {
        MinerRevenues r = miner_revenues(a, p, th);
        // an adoption rate where dark miners earn less than lit miners cannot
        // persist: the marginal dark miner leaves
        if (a > 0.0 && a < 1.0 && r.r_dark < r.r_lit) {
            rep.candidates.emplace_back(a, a * r.r_dark + (1.0 - a) * r.r_lit);
            continue;
        }
        double m = a * r.r_dark + (1.0 - a) * r.r_lit;
        rep.candidates.emplace_back(a, m);
        if (m > best_m + 1e-12 || (std::fabs(m - best_m) <= 1e-12 && a < best_alpha)) {
            best_m = m;
            best_alpha = a;
        }
    }

    rep.alpha_star = best_alpha;
    rep.regime = best_alpha >= 1.0 ? AdoptionRegime::FullAdoption : AdoptionRegime::PartialAdoption;
    rep.arb_regime = regime_at(best_alpha, th);
    rep.arb_venues = regime_venues(rep.arb_regime);
    rep.user0_venue = user0_best_venue(best_alpha, p, th);
    rep.revenues = miner_revenues(best_alpha, p, th);
    rep.welfare = welfare_report(rep, p, true);
    return rep;
}

EquilibriumReport spe(const ModelParams& p) { return spe(p, mechanics_calibration(p)); }

WelfareBreakdown welfare_report(const EquilibriumReport& rep, const ModelParams& p,
                                bool with_dark) {
    require_valid(p);
    const int B = p.block_capacity;
    const double q = q_of(p);
    const double c = p.arb_profit;
    const double v = p.v_bm2(), vb1 = p.v_bm1(), vb = p.v_b();
    const double gv = p.lit_fee_multiplier * v;
    const double v0 = p.frontrunnable_valuation;

    WelfareBreakdown w;
    if (!with_dark) {
        const double lit_payoff = (v0 - v) - q * c;
        if (lit_payoff >= 0.0) {
            w.user0 = lit_payoff;
            w.non_frontrunnable_users = sum_valuations(p, 1, B - 2) - (B - 2) * v;
            w.miners = (B - 1) * v + (1.0 - p.detect_prob) * (1.0 - p.detect_prob) * vb1 + q * gv;
            w.arbitrageurs = q * (c - gv);
            w.aggregate = v0 + sum_valuations(p, 1, B - 1) - q * vb1;
        } else {
            // frontrunning costs exceed the gain from trading; user0 abstains
            w.user0 = 0.0;
            w.non_frontrunnable_users = sum_valuations(p, 1, B) - B * vb;
            w.miners = B * vb;
            w.arbitrageurs = 0.0;
            w.aggregate = sum_valuations(p, 1, B);
        }
        return w;
    }

    if (rep.user0_venue == Venue::Dark) {
        w.user0 = rep.alpha_star * (v0 - vb1) - rep.transfer_theta;
        w.non_frontrunnable_users = sum_valuations(p, 1, B - 1) - (B - 1) * vb1;
        // r_dark already carries any committed transfer
        w.miners = rep.alpha_star * rep.revenues.r_dark +
                   (1.0 - rep.alpha_star) * rep.revenues.r_lit;
        w.arbitrageurs = 0.0;
        w.aggregate = v0 + sum_valuations(p, 1, B - 1);
        return w;
    }

    const double a = rep.alpha_star;
    w.user0 = user0_payoff(Venue::Lit, a, p, rep.arb_regime);
    w.non_frontrunnable_users = sum_valuations(p, 1, B - 2) - (B - 2) * v;
    w.miners = a * rep.revenues.r_dark + (1.0 - a) * rep.revenues.r_lit;
    PayoffMatrix m = arb_payoff_matrix(a, p);
    const MatrixCell& cell = m.at(rep.arb_venues.first, rep.arb_venues.second);
    w.arbitrageurs = cell.a1 + cell.a2;
    const double pf = frontrun_probability(a, p, rep.arb_regime);
    // frontrun displaces the marginal lit user B-1
    w.aggregate = v0 + sum_valuations(p, 1, B - 1) - pf * vb1;
    return w;
}

EquilibriumReport apply_transfer(const ModelParams& p, const MatrixCalibration& cal) {
    require_valid(p);
    const ThresholdSet th = thresholds(p, cal);
    EquilibriumReport rep;
    rep.regime = AdoptionRegime::FullAdoption;
    rep.alpha_star = 1.0;
    rep.user0_venue = Venue::Dark;
    rep.arb_regime = ArbRegime::DarkDark;
    rep.arb_venues = regime_venues(rep.arb_regime);
    rep.transfer_theta = p.arb_profit > th.c1.value ? 0.0 : th.theta.value;
    rep.revenues = miner_revenues(1.0, p, th);
    rep.revenues.r_dark += rep.transfer_theta;
    rep.welfare = welfare_report(rep, p, true);
    return rep;
}

EquilibriumReport apply_transfer(const ModelParams& p) {
    return apply_transfer(p, mechanics_calibration(p));
}

TransactionCostReport transaction_costs(const ModelParams& p, const MatrixCalibration& cal) {
    require_valid(p);
    const ThresholdSet th = thresholds(p, cal);
    const int B = p.block_capacity;
    TransactionCostReport t;
    if (p.arb_profit > th.c1.value) {
        t.min_fee_before = p.v_b();
        t.total_fee_before = B * p.v_b();
        t.min_fee_after = p.v_bm1();
        t.total_fee_after = B * p.v_bm1();
        return t;
    }
    t.min_fee_before = fee_floor(FeeScenario::FrontrunnableWithArbSpace, p);
    const double q = q_of(p);
    t.total_fee_before = (B - 1) * p.v_bm2() +
                         (1.0 - p.detect_prob) * (1.0 - p.detect_prob) * p.v_bm1() +
                         q * p.lit_fee_multiplier * p.v_bm2();
    EquilibriumReport rep = spe(p, cal);
    if (rep.user0_venue == Venue::Lit) {
        t.min_fee_after = fee_floor(FeeScenario::FrontrunnableWithArbSpace, p);
    } else {
        t.min_fee_after = fee_floor(FeeScenario::FrontrunnableNoArbSpace, p);
    }
    t.total_fee_after =
        rep.alpha_star * rep.revenues.r_dark + (1.0 - rep.alpha_star) * rep.revenues.r_lit;
    return t;
}

std::vector<SensitivityEntry> threshold_sensitivities(const ModelParams& p, double h) {
    require_valid(p);
    if (h <= 0.0) throw std::invalid_argument("finite-difference step must be positive");
    if (p.detect_prob - h <= 0.0 || p.detect_prob + h >= 1.0)
        throw std::invalid_argument("p +/- h must stay inside (0,1)");
    ModelParams lo = p, hi = p;
    lo.detect_prob -= h;
    hi.detect_prob += h;
    ThresholdSet tlo = thresholds(lo), thi = thresholds(hi);

    auto entry = [&](const std::string& name, const ThresholdValue& a,
                     const ThresholdValue& b) {
        SensitivityEntry e;
        e.name = name;
        e.exists = a.exists && b.exists;
        if (e.exists) {
            e.derivative = (b.value - a.value) / (2.0 * h);
            e.sign = e.derivative > 0 ? 1 : (e.derivative < 0 ? -1 : 0);
        }
        return e;
    };
    return {
        entry("alpha1", tlo.alpha1, thi.alpha1), entry("alpha2", tlo.alpha2, thi.alpha2),
        entry("lambda1", tlo.lambda1, thi.lambda1), entry("lambda2", tlo.lambda2, thi.lambda2),
        entry("lambda3", tlo.lambda3, thi.lambda3),
    };
}

}  // namespace mevsim
