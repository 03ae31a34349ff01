#include "mevsim/payoff_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mevsim {

int PayoffMatrix::index(Venue v) {
    switch (v) {
        case Venue::Dark: return 0;
        case Venue::Lit: return 1;
        case Venue::Both: return 2;
        default: throw std::invalid_argument("arbitrageurs choose from {Dark, Lit, Both}");
    }
}

const MatrixCell& PayoffMatrix::at(Venue row, Venue col) const {
    return cells[index(row)][index(col)];
}
MatrixCell& PayoffMatrix::at(Venue row, Venue col) {
    return cells[index(row)][index(col)];
}

MatrixCalibration mechanics_calibration(const ModelParams& p) {
    // Profile (Lit, Both), both informed (prob q): the both-venue player faces
    // no dark competition and seals v[B-2] in the dark. With r auction rounds
    // and the lit-only player opening, r=1 leaves the both-player's dark copy
    // as his only order; an adopting miner executes the dark segment first, so
    // he wins at price v[B-2] even though the lit-only player holds the high
    // bid. Every other (r, first-mover) branch resolves on lit fees alone.
    // Expectation over r and the uniform first mover:
    //   A1 = q(  (c - E[price])/2 - alpha*lambda*(c - v)/2 )
    //   A2 = q(  (c - E[price])/2 + alpha*lambda*(c - v)/2 )
    // with E[price] = v + eps(1/lambda - 1) = gamma*v for consistent gamma.
    const double q = 1.0 - (1.0 - p.detect_prob) * (1.0 - p.detect_prob);
    const double c = p.arb_profit;
    const double gv = p.lit_fee_multiplier * p.v_bm2();
    const double lam = p.auction_continuation;
    const double half = 0.5 * (c - gv);
    const double steal = 0.5 * lam * (c - p.v_bm2());
    MatrixCalibration cal;
    cal.lit_both_a1_at0 = q * half;
    cal.lit_both_a2_at0 = q * half;
    cal.lit_both_a1_at1 = q * (half - steal);
    cal.lit_both_a2_at1 = q * (half + steal);
    return cal;
}

PayoffMatrix arb_payoff_matrix(double alpha, const ModelParams& p,
                               const MatrixCalibration& cal) {
    require_valid(p);
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha outside [0,1]");
    const double prob = p.detect_prob;
    const double q = 1.0 - (1.0 - prob) * (1.0 - prob);
    const double c = p.arb_profit;
    const double v = p.v_bm2();
    const double gv = p.lit_fee_multiplier * v;

    PayoffMatrix m;
    auto set = [&m](Venue r, Venue col, double a1, double a2, CellProvenance pr) {
        m.at(r, col) = {a1, a2, pr};
    };
    const double dd = alpha * prob * (1.0 - prob) * (c - v);
    set(Venue::Dark, Venue::Dark, dd, dd, CellProvenance::Analytic);
    set(Venue::Dark, Venue::Lit, alpha * q * (c - v), (1.0 - alpha) * prob * (c - v),
        CellProvenance::Analytic);
    set(Venue::Lit, Venue::Dark, (1.0 - alpha) * prob * (c - v), alpha * q * (c - v),
        CellProvenance::Analytic);
    set(Venue::Dark, Venue::Both, dd, (1.0 - alpha) * prob * (c - v), CellProvenance::Analytic);
    set(Venue::Both, Venue::Dark, (1.0 - alpha) * prob * (c - v), dd, CellProvenance::Analytic);
    const double ll = 0.5 * (c - gv) * q;
    set(Venue::Lit, Venue::Lit, ll, ll, CellProvenance::Analytic);
    const double bb = 0.5 * (1.0 - alpha) * (c - gv) * q;
    set(Venue::Both, Venue::Both, bb, bb, CellProvenance::Analytic);

    const double lb1 = cal.lit_both_a1_at0 + alpha * (cal.lit_both_a1_at1 - cal.lit_both_a1_at0);
    const double lb2 = cal.lit_both_a2_at0 + alpha * (cal.lit_both_a2_at1 - cal.lit_both_a2_at0);
    set(Venue::Lit, Venue::Both, lb1, lb2, CellProvenance::SimulationCalibrated);
    set(Venue::Both, Venue::Lit, lb2, lb1, CellProvenance::SimulationCalibrated);
    return m;
}

PayoffMatrix arb_payoff_matrix(double alpha, const ModelParams& p) {
    return arb_payoff_matrix(alpha, p, mechanics_calibration(p));
}

namespace {

constexpr Venue kChoices[3] = {Venue::Dark, Venue::Lit, Venue::Both};

int venue_pref(Venue v) {  // tie-break order Both > Lit > Dark
    switch (v) {
        case Venue::Both: return 2;
        case Venue::Lit: return 1;
        default: return 0;
    }
}

}  // namespace

std::vector<std::pair<Venue, Venue>> pure_nash_at(double alpha, const ModelParams& p,
                                                  const MatrixCalibration& cal) {
    const PayoffMatrix m = arb_payoff_matrix(alpha, p, cal);
    double scale = std::fabs(p.arb_profit) + 1.0;
    const double tol = 1e-12 * scale;
    std::vector<std::pair<Venue, Venue>> out;
    for (Venue r : kChoices) {
        for (Venue c : kChoices) {
            bool ne = true, tiebreak_reject = false;
            for (Venue r2 : kChoices) {
                double d = m.at(r2, c).a1 - m.at(r, c).a1;
                if (d > tol) ne = false;
                // equally good deviation to a more-preferred venue breaks it
                if (std::fabs(d) <= tol && venue_pref(r2) > venue_pref(r))
                    tiebreak_reject = true;
            }
            for (Venue c2 : kChoices) {
                double d = m.at(r, c2).a2 - m.at(r, c).a2;
                if (d > tol) ne = false;
                if (std::fabs(d) <= tol && venue_pref(c2) > venue_pref(c))
                    tiebreak_reject = true;
            }
            if (ne && !tiebreak_reject) out.emplace_back(r, c);
        }
    }
    return out;
}

std::vector<NashRegion> pure_nash_regions(const ModelParams& p, const MatrixCalibration& cal,
                                          int grid_points) {
    if (grid_points < 2) throw std::invalid_argument("need at least 2 grid points");
    auto eq_at = [&](double a) { return pure_nash_at(a, p, cal); };

    std::vector<NashRegion> regions;
    double lo = 0.0;
    auto current = eq_at(0.0);
    for (int i = 1; i < grid_points; ++i) {
        double a = static_cast<double>(i) / (grid_points - 1);
        auto here = eq_at(a);
        if (here == current) continue;
        // bisect the boundary between the previous grid point and a
        double bl = a - 1.0 / (grid_points - 1), bh = a;
        for (int it = 0; it < 200 && bh - bl > 1e-10; ++it) {
            double mid = 0.5 * (bl + bh);
            if (eq_at(mid) == current)
                bl = mid;
            else
                bh = mid;
        }
        regions.push_back({lo, bh, current});
        lo = bh;
        current = here;
    }
    regions.push_back({lo, 1.0, current});
    return regions;
}

}  // namespace mevsim
