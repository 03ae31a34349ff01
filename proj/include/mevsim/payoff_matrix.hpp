#pragma once

#include <vector>

#include "mevsim/params.hpp"
#include "mevsim/venue.hpp"

namespace mevsim {

enum class CellProvenance { Analytic, SimulationCalibrated };

struct MatrixCell {
    double a1 = 0;
    double a2 = 0;
    CellProvenance provenance = CellProvenance::Analytic;
};

// 3x3 venue game between the two arbitrageurs; rows index player 1's venue,
// columns player 2's, over {Dark, Lit, Both}.
struct PayoffMatrix {
    MatrixCell cells[3][3];

    static int index(Venue v);
    const MatrixCell& at(Venue row, Venue col) const;
    MatrixCell& at(Venue row, Venue col);
};

// The source table leaves the (Lit,Both)/(Both,Lit) cells ambiguous, so
// their values are pinned by simulation. Every payoff is linear in alpha
// (adoption enters as a Bernoulli mixture), so endpoint values at alpha=0 and
// alpha=1 determine the whole cell.
struct MatrixCalibration {
    // (row=Lit, col=Both); the mirrored cell follows by player symmetry.
    double lit_both_a1_at0 = 0, lit_both_a1_at1 = 0;
    double lit_both_a2_at0 = 0, lit_both_a2_at1 = 0;
};

// Deterministic evaluation of the simulator's own block-assembly rules for
// the ambiguous cells (expected over detection, auction length, first mover,
// adoption). The Monte Carlo estimator must agree with this within noise;
// tests enforce that. Assumes gamma consistent with (eps, lambda), i.e.
// gamma*v[B-2] = v[B-2] + eps*(1/lambda - 1).
MatrixCalibration mechanics_calibration(const ModelParams& params);

PayoffMatrix arb_payoff_matrix(double alpha, const ModelParams& params,
                               const MatrixCalibration& calib);

// Convenience: mechanics_calibration applied.
PayoffMatrix arb_payoff_matrix(double alpha, const ModelParams& params);

struct NashRegion {
    double alpha_lo = 0;
    double alpha_hi = 0;
    // Pure equilibria surviving the tie-break order Both > Lit > Dark.
    std::vector<std::pair<Venue, Venue>> equilibria;
};

// Pure Nash equilibria of the venue game at one alpha.
std::vector<std::pair<Venue, Venue>> pure_nash_at(double alpha, const ModelParams& params,
                                                  const MatrixCalibration& calib);

// Partition of [0,1] by equilibrium set: dense grid plus bisection-refined
// boundaries. Regions where no pure equilibrium survives carry an empty set.
std::vector<NashRegion> pure_nash_regions(const ModelParams& params,
                                          const MatrixCalibration& calib,
                                          int grid_points = 2001);

}  // namespace mevsim
