#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mevsim/equilibrium.hpp"
#include "mevsim/params.hpp"
#include "mevsim/payoff_matrix.hpp"
#include "mevsim/rng.hpp"
#include "mevsim/venue.hpp"

namespace mevsim {

// Bidding behavior of one arbitrageur. The equilibrium rule plays the
// analytic bidding case matching the (own venue, opponent venue) pair; a fixed rule
// seals/places the given fees once and never escalates.
struct ArbBidRule {
    bool equilibrium = true;
    std::optional<double> fixed_dark;
    std::optional<double> fixed_lit;
};

struct StrategyProfile {
    double alpha = 0;
    Venue user0_venue = Venue::Lit;
    std::optional<double> user0_fee;  // default: scenario fee floor
    std::array<Venue, 2> arb_venue{Venue::Both, Venue::Both};
    std::array<ArbBidRule, 2> arb_rule{};
    // The source states the lit opening bid as v[B-2] in one place and
    // v[B-1] in another; the default follows the former.
    bool lit_opening_at_vbm1 = false;
};

StrategyProfile profile_from_json_text(const std::string& text);
StrategyProfile profile_from_json_file(const std::string& path);

// ---- pending transactions and blocks ----

struct PendingTx {
    int owner = 0;    // user index 0..B+1, or -1 for arbitrageurs
    int arb_id = -1;  // 0/1 when owner == -1
    Venue venue = Venue::Lit;  // the copy's venue: Lit or Dark
    double fee = 0;
    int nonce = 0;  // dual-venue copies share a nonce
    bool is_frontrunnable = false;

    bool is_arb() const { return owner < 0; }
};

struct BlockEntry {
    PendingTx tx;
    double paid_fee = 0;
};

struct Block {
    bool miner_adopted_dark = false;
    std::vector<BlockEntry> ordered_inclusions;  // execution order, size <= B
    // (winning arbitrageur, victim user index) when an insertion happened
    std::optional<std::pair<int, int>> frontrun_event;
};

// ---- auction primitives ----

int sample_auction_rounds(EpisodeRng& rng, double lambda);

struct LitBidder {
    int id = 0;
    bool escalate = true;        // false: place fixed_bid once, never raise
    double fixed_bid = 0;
    bool moves_first_if_single_detector = false;
};

struct LitAuctionResult {
    // final standing bid per bidder id, absent if the bidder never bid
    std::vector<std::pair<int, double>> standing;
    std::optional<int> high_bidder;
    double high_bid = 0;
};

// Ascending auction with r ~ Geometric(lambda) rounds, alternating movers,
// minimal increment eps, uniform first mover when both detected.
LitAuctionResult run_lit_auction(const std::vector<LitBidder>& bidders,
                                 const ModelParams& params, EpisodeRng& rng,
                                 double opening_bid);

// One-round sealed-bid first-price auction; returns index of winner in bids.
std::optional<size_t> run_dark_auction(const std::vector<double>& bids, EpisodeRng& rng);

// Miner tx selection: top-B by fee among visible copies (lit always, dark iff
// adopted) after same-nonce dedup keeping the higher-fee copy; execution
// order puts the dark segment first, fee-descending within segments.
Block assemble_block(const std::vector<PendingTx>& mempool_lit,
                     const std::vector<PendingTx>& darkpool, bool miner_adopted_dark,
                     int capacity, EpisodeRng& rng);

struct EpisodeOutcome {
    Block block;
    double user0_payoff = 0;
    std::array<double, 2> arb_payoff{0, 0};
    double miner_revenue = 0;
    std::array<bool, 2> detection_draws{false, false};
    bool frontrun = false;
};

EpisodeOutcome run_episode(const StrategyProfile& profile, const ModelParams& params,
                           EpisodeRng& rng);

// ---- Monte Carlo estimation ----

struct Estimate {
    double mean = 0;
    std::optional<double> se;  // absent when n < 2
};

struct PayoffEstimates {
    Estimate user0;
    std::array<Estimate, 2> arb;
    Estimate miner_revenue;
    Estimate frontrun_frequency;
    uint64_t episodes = 0;
};

// Deterministic given (profile, params, n, seed) regardless of worker count:
// per-episode RNG streams keyed by episode index, chunked accumulation merged
// in index order.
PayoffEstimates estimate_payoffs(const StrategyProfile& profile, const ModelParams& params,
                                 uint64_t n_episodes, uint64_t seed, int workers = 1);

// Monte Carlo calibration of the ambiguous (Lit,Both) matrix cells: endpoint
// estimates at alpha = 0 and alpha = 1 (payoffs are linear in alpha).
MatrixCalibration calibrate_matrix(const ModelParams& params, uint64_t n_episodes,
                                   uint64_t seed, int workers = 1);

// ---- equilibrium certification ----

struct DeviationRecord {
    std::string agent;        // "user0", "arb1", "arb2"
    std::string description;  // e.g. "venue=Dark fee=3.25"
    double mean = 0;
    double se = 0;
    double gain = 0;  // vs the agent's equilibrium mean
};

struct Certificate {
    bool passed = false;
    double abs_tol = 0;
    int fee_grid_points = 64;
    PayoffEstimates baseline;
    std::vector<DeviationRecord> profitable;  // deviations exceeding tolerance
    DeviationRecord worst;                    // largest-gain deviation overall
    // analytic miner migration check at alpha* +/- delta
    bool miner_check_passed = false;
    double r_dark_up = 0, r_lit_down = 0, r_dark_star = 0, r_lit_star = 0;
};

struct VerifyOptions {
    uint64_t episodes = 100000;
    uint64_t seed = 1;
    int workers = 1;
    int fee_grid_points = 64;
    // Deviations must beat max(3*SE, abs_tol). Default abs_tol is the largest
    // adjacent valuation gap around the inclusion margin: with non-strategic
    // resident users a fee deviation can harvest at most one such gap, which
    // the smallness advisory keeps small.
    std::optional<double> abs_tol;
};

Certificate verify_equilibrium(const EquilibriumReport& report, const ModelParams& params,
                               const VerifyOptions& opts);

}  // namespace mevsim
