#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mevsim {

// Game primitives. Valuations are indexed 1..B+1 (paper-style) with the
// frontrunnable user's valuation v0 held separately; v(i) does the shift.
struct ModelParams {
    int block_capacity = 0;               // B
    std::vector<double> user_valuations;  // v[1..B+1], strictly decreasing
    double frontrunnable_valuation = 0;   // v0
    double arb_profit = 0;                // c
    double detect_prob = 0;               // p
    double min_increment = 0;             // eps
    double auction_continuation = 0;      // lambda in (0,1]
    double lit_fee_multiplier = 0;        // gamma
    double smallness_kappa = 0.05;        // Assumption-1 bound, configurable

    double v(int i) const { return user_valuations.at(static_cast<size_t>(i - 1)); }
    double v_bm2() const { return v(block_capacity - 2); }
    double v_bm1() const { return v(block_capacity - 1); }
    double v_b() const { return v(block_capacity); }
    double v_bp1() const { return v(block_capacity + 1); }
};

enum class ParamError {
    NonMonotoneValuations,
    GammaOutOfRange,
    ProbabilityOutOfRange,
    CapacityTooSmall,
};

const char* to_string(ParamError e);

// Returns the complete list of violated invariants; empty means valid.
std::vector<ParamError> validate(const ModelParams& params);

// True when (v[B-2]-v[B-1]) <= kappa*v[B-1]. Advisory: reported as a warning,
// never an error (several stated parameter sets violate it).
bool assumption1_smallness_holds(const ModelParams& params);

// Throws std::invalid_argument listing every violation unless params validate.
const ModelParams& require_valid(const ModelParams& params);

enum class FeeScenario {
    NoFrontrunnableUser,
    FrontrunnableNoArbSpace,
    FrontrunnableWithArbSpace,
};

// Minimum fee that guarantees inclusion given demand for the B slots.
double fee_floor(FeeScenario scenario, const ModelParams& params);

// Strict-key JSON loader; unknown keys are an error.
ModelParams params_from_json_text(const std::string& text);
ModelParams params_from_json_file(const std::string& path);
std::string params_to_json_text(const ModelParams& params);

// The ascending lit auction settles at v[B-2] + eps*(1/lambda - 1) in
// expectation; the matrix abbreviates that price as gamma*v[B-2]. This returns
// the gamma consistent with (eps, lambda), for building coherent fixtures.
double implied_gamma(const ModelParams& params);

}  // namespace mevsim
