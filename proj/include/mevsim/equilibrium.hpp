#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mevsim/params.hpp"
#include "mevsim/payoff_matrix.hpp"
#include "mevsim/venue.hpp"

namespace mevsim {

enum class Method { ClosedForm, NumericRoot };

struct ThresholdValue {
    double value = 0;
    Method method = Method::ClosedForm;
    bool exists = true;  // false: no indifference point in the regime (corner)
    // closed-form cross-check where the source states one; numeric is
    // authoritative and disagreement is surfaced, never reconciled
    std::optional<double> closed_form_alt;
    bool discrepancy = false;
};

struct ThresholdSet {
    ThresholdValue alpha1;  // upper boundary of the Both/Both region
    ThresholdValue alpha2;  // 1/(2-p)
    ThresholdValue lambda1, lambda2, lambda3;  // user0 indifference per regime
    ThresholdValue c1;      // (v0 - v[B-2]) / (1-(1-p)^2)
    ThresholdValue theta;   // transfer (1-(1-p)^2) c
};

struct RootNotBracketed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arbitrageur venue regime by adoption rate.
enum class ArbRegime { BothBoth, BothDark, DarkDark };

ThresholdSet thresholds(const ModelParams& params, const MatrixCalibration& calib);
ThresholdSet thresholds(const ModelParams& params);

ArbRegime regime_at(double alpha, const ThresholdSet& th);

// Expected payoff of the frontrunnable user by venue, within an arbitrageur
// regime. Dark and the Dark/Dark lit value are the stated closed forms; the
// other lit regimes are the deterministic evaluation of the simulator's rules
// (cross-checked by Monte Carlo in tests).
double user0_payoff(Venue venue, double alpha, const ModelParams& params, ArbRegime regime);

// Expected winning-miner fee revenue by venue side. "dark"/"lit" distinguish
// adopting and non-adopting miners. Expressions follow the welfare proofs.
struct MinerRevenues {
    double r_dark = 0;
    double r_lit = 0;
};
MinerRevenues miner_revenues(double alpha, const ModelParams& params, const ThresholdSet& th);

enum class AdoptionRegime { FullAdoption, PartialAdoption };

struct WelfareBreakdown {
    double user0 = 0;
    double non_frontrunnable_users = 0;
    double miners = 0;        // adoption-weighted expected winning-miner payoff
    double arbitrageurs = 0;  // both together
    double aggregate = 0;     // sum of valuations of included user transactions
};

struct EquilibriumReport {
    AdoptionRegime regime = AdoptionRegime::PartialAdoption;
    double alpha_star = 0;
    Venue user0_venue = Venue::Lit;
    std::pair<Venue, Venue> arb_venues{Venue::Both, Venue::Both};
    ArbRegime arb_regime = ArbRegime::BothBoth;
    MinerRevenues revenues;
    WelfareBreakdown welfare;
    double transfer_theta = 0;  // nonzero only for apply_transfer reports
    // candidate adoption rates examined and the aggregate miner payoff each
    std::vector<std::pair<double, double>> candidates;
};

EquilibriumReport spe(const ModelParams& params, const MatrixCalibration& calib);
EquilibriumReport spe(const ModelParams& params);

WelfareBreakdown welfare_report(const EquilibriumReport& report, const ModelParams& params,
                                bool with_dark);

// Committed transfer: user0 commits theta = (1-(1-p)^2)c to the adopting winning
// miner; resulting equilibrium is full adoption.
EquilibriumReport apply_transfer(const ModelParams& params, const MatrixCalibration& calib);
EquilibriumReport apply_transfer(const ModelParams& params);

// Minimum inclusion fee and expected total block fee, before (no dark venue)
// and after (dark venue at the selected equilibrium).
struct TransactionCostReport {
    double min_fee_before = 0, min_fee_after = 0;
    double total_fee_before = 0, total_fee_after = 0;
};
TransactionCostReport transaction_costs(const ModelParams& params, const MatrixCalibration& calib);

struct SensitivityEntry {
    std::string name;
    double derivative = 0;
    int sign = 0;
    bool exists = true;
};
// Central finite differences of thresholds w.r.t. p. Uses the mechanics
// calibration at each perturbed point (a fixed Monte Carlo calibration cannot
// follow the perturbation).
std::vector<SensitivityEntry> threshold_sensitivities(const ModelParams& params, double h);

}  // namespace mevsim
