#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mevsim/amm.hpp"
#include "mevsim/venue.hpp"

namespace mevsim {

enum class SwapDirection { InToOut, OutToIn };

struct SwapEvent {
    long long block_number = 0;
    int tx_index = 0;  // execution order within the block
    std::string tx_hash;
    std::string pool_id;
    SwapDirection direction = SwapDirection::InToOut;
    double input_amount = 0;
    double output_amount = 0;
    double gas_fee = 0;
    std::optional<double> reserve_in, reserve_out;  // pre-trade r1, r2
    std::optional<double> min_output;               // slippage bound m
    std::optional<Venue> venue_tag;                 // Lit | Dark when known
    std::string day;                                // e.g. 2021-03-14
};

struct ArbitrageMatch {
    SwapEvent front, victim, back;
    double revenue = 0;           // back.output - front.input
    double profit = 0;            // revenue - gas of both legs
    double cost_to_revenue = 0;   // NaN when revenue <= 0
};

// CSV with a header row naming SwapEvent fields; optional columns may be
// blank. Throws on malformed rows or unknown columns.
std::vector<SwapEvent> swap_events_from_csv_file(const std::string& path);
std::vector<SwapEvent> swap_events_from_csv_text(const std::string& text);
std::string matches_to_csv(const std::vector<ArbitrageMatch>& matches);

// Insertion arbitrage identification, conditions 1-4: same block, same pool
// opposite-direction legs with back input equal to front output, at least one
// same-direction victim strictly between them, one back per front. Greedy
// earliest-front pairing; one match row per victim. `relative_tolerance` 0
// demands exact equality of the recorded amounts.
std::vector<ArbitrageMatch> identify_arbitrages(std::vector<SwapEvent> events,
                                                double relative_tolerance = 0.0);

struct Classification {
    bool classifiable = false;  // reserves and min_output present
    bool frontrunnable = false;
    double best_revenue = 0;
    double revenue_at_max_input = 0;
    double max_input = 0;
};

// Per-event frontrunnability via the AMM revenue search; events lacking
// reserves or m are reported unclassifiable, never guessed.
std::vector<Classification> classify_frontrunnable(const std::vector<SwapEvent>& events);

struct DailyStats {
    std::string day;
    std::optional<double> frontrun_probability;  // frontrun / frontrunnable
    std::optional<double> dark_proportion;       // dark frontrunnable / all frontrunnable
    std::optional<double> mean_cost_to_revenue_lit;
    std::optional<double> mean_cost_to_revenue_dark;
    int frontrunnable_count = 0;  // per the chosen denominator
    int frontrun_count = 0;
    int match_count = 0;
};

// Aggregates per day. With `denominator_lit_only` (default) the frontrun
// probability denominator counts only lit-tagged frontrunnable transactions:
// dark submissions cannot be frontrun.
std::vector<DailyStats> daily_series(const std::vector<SwapEvent>& events,
                                     const std::vector<ArbitrageMatch>& matches,
                                     const std::vector<Classification>& classifications,
                                     bool denominator_lit_only = true);

}  // namespace mevsim
