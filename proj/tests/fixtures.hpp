#pragma once

#include "mevsim/params.hpp"

namespace fixtures {

// Coarse-increment economy where the adoption game has the full region
// structure: Both/Both below alpha1 ~ 0.474, the asymmetric pair up to
// alpha2 = 2/3, Dark/Dark above. gamma = 1.05 is consistent with
// (eps, lambda) = (14/15, 0.7); c1 = 16, so c = 9 is on the partial-adoption
// side of the c1 boundary.
inline mevsim::ModelParams main_params() {
    mevsim::ModelParams p;
    p.block_capacity = 5;
    p.user_valuations = {10, 9, 8, 7, 6, 5};
    p.frontrunnable_valuation = 20;
    p.arb_profit = 9;
    p.detect_prob = 0.5;
    p.min_increment = 14.0 / 15.0;
    p.auction_continuation = 0.7;
    p.lit_fee_multiplier = 1.05;
    return p;
}

// Unit-scale economy matching the worked threshold numbers: v[B-2] = 1,
// v0 = 10, p = 0.5 gives c1 = 12; c = 4 gives theta = 3.
inline mevsim::ModelParams unit_params() {
    mevsim::ModelParams p;
    p.block_capacity = 4;
    p.user_valuations = {2, 1, 0.8, 0.6, 0.5};
    p.frontrunnable_valuation = 10;
    p.arb_profit = 4;
    p.detect_prob = 0.5;
    p.min_increment = 0.05;
    p.auction_continuation = 0.5;
    p.lit_fee_multiplier = 1.05;
    return p;
}

// Same economy at c = 2 for the matrix cell spot values: (Dark,Dark) at
// alpha=0.8 is 0.2 each, (Lit,Lit) is 0.35625 each.
inline mevsim::ModelParams matrix_params() {
    mevsim::ModelParams p = unit_params();
    p.arb_profit = 2;
    return p;
}

// Tight-increment economy with a narrow valuation gap, used wherever the simulator
// must reproduce the analytic matrix cells to Monte Carlo precision: with
// eps = 0.004 the lit escalation almost never exceeds c.
inline mevsim::ModelParams fine_params() {
    mevsim::ModelParams p;
    p.block_capacity = 5;
    p.user_valuations = {2.0, 1.8, 1.6, 1.4, 1.2, 1.0};
    p.frontrunnable_valuation = 2.5;
    p.arb_profit = 2.6;
    p.detect_prob = 0.5;
    p.min_increment = 0.004;
    p.auction_continuation = 0.5;
    p.lit_fee_multiplier = 1.0025;
    return p;
}

}  // namespace fixtures
