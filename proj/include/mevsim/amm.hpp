#pragma once

#include <optional>

namespace mevsim {

// Constant-product pool with a 0.3% input fee (Uniswap/Sushiswap V2).
struct PoolState {
    double reserve_in = 0;   // r1
    double reserve_out = 0;  // r2
};

struct VictimOrder {
    double input_amount = 0;  // v
    double min_output = 0;    // slippage bound m
};

// Output of swapping x input tokens: 0.997*x*r2 / (r1 + 0.997*x).
double swap_output(const PoolState& pool, double x);

// Pool after the swap (reserves move by the full input and the output).
PoolState apply_swap(const PoolState& pool, double x);

// The source text evaluates the victim's post-frontrun quote with the plain
// denominator (r1+x) + 0.997v; real V2 reserve updates give the same form, so
// the flag exists only to make the choice explicit and testable.
enum class ConstraintVariant { PaperVerbatim, FeeAdjustedReserve };

// True iff the victim's swap of v still clears its min-output m after a
// frontrun of size x moved the pool.
bool victim_constraint(const PoolState& pool, const VictimOrder& victim, double x,
                       ConstraintVariant variant = ConstraintVariant::PaperVerbatim);

struct MaxInputResult {
    double closed_form = 0;       // exact-coefficient closed form
    double closed_form_printed = 0;  // with the source's rounded constants
    double bisection = 0;         // root of victim_constraint, tolerance 1e-12
    bool agree = false;           // closed_form vs bisection within rel 1e-6
};

// Largest frontrun size leaving the victim's constraint satisfied; 0 when the
// constraint binds at x=0. The closed form is
//   maxInput = t/(1994000*sqrt(m)) - (1997/1994)r1 - (997/2000)v
// with t = sqrt(9000000 r1^2 m + 3976036000000 r1 r2 v - 5964054000 r1 m v
//              + 988053892081 m v^2).
// The printed variant substitutes the rounded coefficients 5.01505e-7 and
// 1.0015 as they appear in the source; rounding there is severe enough to
// miss the root by ~1e-2 relative, which the result records.
MaxInputResult max_input(const PoolState& pool, const VictimOrder& victim);

struct ArbitragePlan {
    double front_input = 0;   // x
    double front_output = 0;  // y
    double back_output = 0;   // x'
    double revenue = 0;       // x' - x
};

// Three sequential swaps: front (x in), victim (v in, same direction), back
// (y in, reverse direction); revenue = back output - front input.
ArbitragePlan arbitrage_revenue(const PoolState& pool, const VictimOrder& victim, double x);

struct FrontrunSearch {
    double best_x = 0;
    double best_revenue = 0;
    double revenue_at_max_input = 0;
    double max_input = 0;
    bool frontrunnable = false;  // best_revenue > 0
};

// Maximizes revenue over x in [0, max_input]: grid pre-scan for unimodality,
// golden-section refine (dense-grid fallback on non-unimodal scans).
FrontrunSearch best_frontrun(const PoolState& pool, const VictimOrder& victim);

}  // namespace mevsim
