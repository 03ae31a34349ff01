#include "mevsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mevsim/mixed_bid.hpp"

namespace mevsim {

namespace {

constexpr int kArbNonceBase = 1000;

bool rule_places_lit(Venue v, const ArbBidRule& r) {
    return has_lit(v) && (r.equilibrium || r.fixed_lit.has_value());
}
bool rule_places_dark(Venue v, const ArbBidRule& r) {
    return has_dark(v) && (r.equilibrium || r.fixed_dark.has_value());
}

}  // namespace

StrategyProfile profile_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    StrategyProfile prof;
    static const std::set<std::string> keys = {"alpha",    "user0", "arb1",
                                              "arb2",     "lit_opening_at_vbm1"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!keys.count(it.key())) throw std::invalid_argument("unknown profile key: " + it.key());
    prof.alpha = j.at("alpha").get<double>();
    auto parse_venue = [](const nlohmann::json& node) {
        auto v = venue_from_string(node.get<std::string>());
        if (!v) throw std::invalid_argument("bad venue string");
        return *v;
    };
    const auto& u = j.at("user0");
    prof.user0_venue = parse_venue(u.at("venue"));
    if (u.contains("fee")) prof.user0_fee = u.at("fee").get<double>();
    for (int a = 0; a < 2; ++a) {
        const auto& node = j.at(a == 0 ? "arb1" : "arb2");
        prof.arb_venue[a] = parse_venue(node.at("venue"));
        if (prof.arb_venue[a] == Venue::None)
            throw std::invalid_argument("arbitrageurs choose from {Dark, Lit, Both}");
        ArbBidRule rule;
        if (node.contains("rule") && node.at("rule").get<std::string>() == "fixed") {
            rule.equilibrium = false;
            if (node.contains("dark_fee")) rule.fixed_dark = node.at("dark_fee").get<double>();
            if (node.contains("lit_fee")) rule.fixed_lit = node.at("lit_fee").get<double>();
        }
        prof.arb_rule[a] = rule;
    }
    if (j.contains("lit_opening_at_vbm1"))
        prof.lit_opening_at_vbm1 = j.at("lit_opening_at_vbm1").get<bool>();
    if (prof.alpha < 0 || prof.alpha > 1) throw std::invalid_argument("alpha outside [0,1]");
    return prof;
}

StrategyProfile profile_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return profile_from_json_text(ss.str());
}

int sample_auction_rounds(EpisodeRng& rng, double lambda) {
    if (lambda <= 0.0 || lambda > 1.0)
        throw std::invalid_argument("geometric success rate must lie in (0,1]");
    return rng.geometric(lambda);
}

LitAuctionResult run_lit_auction(const std::vector<LitBidder>& bidders,
                                 const ModelParams& params, EpisodeRng& rng,
                                 double opening_bid) {
    LitAuctionResult res;
    if (bidders.empty()) return res;
    if (bidders.size() == 1) {
        const LitBidder& b = bidders[0];
        double bid = b.escalate ? opening_bid : b.fixed_bid;
        res.standing.emplace_back(b.id, bid);
        res.high_bidder = b.id;
        res.high_bid = bid;
        return res;
    }
    if (bidders.size() > 2) throw std::invalid_argument("at most two lit bidders");

    const int r = sample_auction_rounds(rng, params.auction_continuation);
    int mover;
    if (bidders[0].moves_first_if_single_detector)
        mover = 0;
    else if (bidders[1].moves_first_if_single_detector)
        mover = 1;
    else
        mover = static_cast<int>(rng.below(2));

    std::array<std::optional<double>, 2> standing;
    std::optional<int> holder;
    double high = 0;
    int consecutive_passes = 0;
    for (int round = 1; round <= r && consecutive_passes < 2; ++round) {
        const LitBidder& b = bidders[static_cast<size_t>(mover)];
        std::optional<double> bid;
        if (b.escalate) {
            if (!holder)
                bid = opening_bid;
            else if (*holder != mover)
                bid = high + params.min_increment;
        } else if (!standing[static_cast<size_t>(mover)]) {
            if (!holder || b.fixed_bid > high) bid = b.fixed_bid;
        }
        if (bid) {
            standing[static_cast<size_t>(mover)] = *bid;
            holder = mover;
            high = *bid;
            consecutive_passes = 0;
        } else {
            ++consecutive_passes;
        }
        mover = 1 - mover;
    }
    for (size_t i = 0; i < 2; ++i)
        if (standing[i]) res.standing.emplace_back(bidders[i].id, *standing[i]);
    if (holder) {
        res.high_bidder = bidders[static_cast<size_t>(*holder)].id;
        res.high_bid = high;
    }
    return res;
}

std::optional<size_t> run_dark_auction(const std::vector<double>& bids, EpisodeRng& rng) {
    if (bids.empty()) return std::nullopt;
    double best = *std::max_element(bids.begin(), bids.end());
    std::vector<size_t> winners;
    for (size_t i = 0; i < bids.size(); ++i)
        if (bids[i] == best) winners.push_back(i);
    if (winners.size() == 1) return winners[0];
    return winners[rng.below(winners.size())];
}

namespace {

struct Keyed {
    PendingTx tx;
    double key;  // random tie-break key
};

}  // namespace

Block assemble_block(const std::vector<PendingTx>& mempool_lit,
                     const std::vector<PendingTx>& darkpool, bool miner_adopted_dark,
                     int capacity, EpisodeRng& rng) {
    Block block;
    block.miner_adopted_dark = miner_adopted_dark;

    std::vector<Keyed> visible;
    for (const auto& t : mempool_lit) visible.push_back({t, rng.uniform()});
    if (miner_adopted_dark)
        for (const auto& t : darkpool) visible.push_back({t, rng.uniform()});

    // same-nonce dedup: keep the strictly higher-fee copy; on a tie the public
    // (lit) copy stands
    std::map<int, size_t> by_nonce;
    std::vector<bool> dropped(visible.size(), false);
    for (size_t i = 0; i < visible.size(); ++i) {
        auto [it, fresh] = by_nonce.try_emplace(visible[i].tx.nonce, i);
        if (fresh) continue;
        size_t j = it->second;
        bool replace;
        if (visible[i].tx.fee != visible[j].tx.fee)
            replace = visible[i].tx.fee > visible[j].tx.fee;
        else
            replace = visible[i].tx.venue == Venue::Lit && visible[j].tx.venue == Venue::Dark;
        if (replace) {
            dropped[j] = true;
            it->second = i;
        } else {
            dropped[i] = true;
        }
    }
    std::vector<Keyed> cands;
    for (size_t i = 0; i < visible.size(); ++i)
        if (!dropped[i]) cands.push_back(visible[i]);

    // top-B selection by fee; equal fees at the cutoff resolve uniformly
    std::sort(cands.begin(), cands.end(), [](const Keyed& a, const Keyed& b) {
        if (a.tx.fee != b.tx.fee) return a.tx.fee > b.tx.fee;
        return a.key < b.key;
    });
    if (cands.size() > static_cast<size_t>(capacity)) cands.resize(static_cast<size_t>(capacity));

    // execution order: dark segment first, fee-descending within segments;
    // at equal lit fees an arbitrage order precedes a user order (insertion
    // places the attacking leg directly ahead of its victim)
    std::stable_sort(cands.begin(), cands.end(), [](const Keyed& a, const Keyed& b) {
        bool ad = a.tx.venue == Venue::Dark, bd = b.tx.venue == Venue::Dark;
        if (ad != bd) return ad;
        if (a.tx.fee != b.tx.fee) return a.tx.fee > b.tx.fee;
        if (a.tx.is_arb() != b.tx.is_arb()) return a.tx.is_arb();
        return a.key < b.key;
    });
    for (const auto& k : cands) block.ordered_inclusions.push_back({k.tx, k.tx.fee});
    return block;
}

namespace {

struct ArbState {
    bool informed = false;
    std::optional<double> lit_standing;
    std::optional<double> dark_bid;      // before relay selection
    bool dark_forwarded = false;         // survived the relay's pick
};

double equilibrium_dark_bid(int j, const StrategyProfile& prof, const ModelParams& p,
                            const std::array<bool, 2>& places_lit_when_informed,
                            const std::array<bool, 2>& informed, EpisodeRng& rng) {
    const Venue mine = prof.arb_venue[static_cast<size_t>(j)];
    const Venue other = prof.arb_venue[static_cast<size_t>(1 - j)];
    const double v = p.v_bm2();
    const double c = p.arb_profit;
    if (mine == Venue::Both) {
        // dark competition possible -> truthful c; otherwise the dark floor
        return has_dark(other) ? c : v;
    }
    // dark-only
    if (other == Venue::Dark) {
        if (p.detect_prob <= 0.0 || p.detect_prob >= 1.0) return c;
        return sample_mixed_fee(rng, p);
    }
    if (other == Venue::Both) {
        bool observed_lit_bid =
            informed[static_cast<size_t>(1 - j)] && places_lit_when_informed[static_cast<size_t>(1 - j)];
        return observed_lit_bid ? c : v;
    }
    return v;  // opponent confined to the lit venue
}

}  // namespace

EpisodeOutcome run_episode(const StrategyProfile& prof, const ModelParams& p,
                           EpisodeRng& rng) {
    require_valid(p);
    const int B = p.block_capacity;
    EpisodeOutcome out;
    const bool adopted = rng.bernoulli(prof.alpha);

    // resident (non-strategic) users bid min(valuation, scenario floor)
    FeeScenario scen = FeeScenario::NoFrontrunnableUser;
    if (prof.user0_venue == Venue::Lit)
        scen = FeeScenario::FrontrunnableWithArbSpace;
    else if (prof.user0_venue == Venue::Dark)
        scen = FeeScenario::FrontrunnableNoArbSpace;
    const double floor = fee_floor(scen, p);

    std::vector<PendingTx> lit_pool, dark_pool;
    for (int i = 1; i <= B + 1; ++i)
        lit_pool.push_back({i, -1, Venue::Lit, std::min(p.v(i), floor), i, false});

    std::optional<double> user0_fee;
    if (prof.user0_venue == Venue::Lit) {
        user0_fee = prof.user0_fee.value_or(p.v_bm2());
        lit_pool.push_back({0, -1, Venue::Lit, *user0_fee, 0, true});
    } else if (prof.user0_venue == Venue::Dark) {
        user0_fee = prof.user0_fee.value_or(p.v_bm1());
        dark_pool.push_back({0, -1, Venue::Dark, *user0_fee, 0, true});
    }

    std::array<ArbState, 2> arb;
    if (prof.user0_venue == Venue::Lit) {
        std::array<bool, 2> d{rng.bernoulli(p.detect_prob), rng.bernoulli(p.detect_prob)};
        out.detection_draws = d;
        std::array<bool, 2> places_lit{
            rule_places_lit(prof.arb_venue[0], prof.arb_rule[0]),
            rule_places_lit(prof.arb_venue[1], prof.arb_rule[1])};
        // a lit bid by one arbitrageur reveals the opportunity to the other
        std::array<bool, 2> informed{d[0] || (d[1] && places_lit[1]),
                                     d[1] || (d[0] && places_lit[0])};
        arb[0].informed = informed[0];
        arb[1].informed = informed[1];

        // lit auction; the insertion leg must not trail the victim's fee
        const double opening =
            std::max(prof.lit_opening_at_vbm1 ? p.v_bm1() : p.v_bm2(), *user0_fee);
        std::vector<LitBidder> bidders;
        for (int j = 0; j < 2; ++j) {
            if (!informed[static_cast<size_t>(j)] || !places_lit[static_cast<size_t>(j)]) continue;
            LitBidder b;
            b.id = j;
            b.escalate = prof.arb_rule[static_cast<size_t>(j)].equilibrium;
            if (!b.escalate) b.fixed_bid = *prof.arb_rule[static_cast<size_t>(j)].fixed_lit;
            b.moves_first_if_single_detector = d[static_cast<size_t>(j)] && !d[static_cast<size_t>(1 - j)];
            bidders.push_back(b);
        }
        auto lit_res = run_lit_auction(bidders, p, rng, opening);
        for (auto& [id, bid] : lit_res.standing) arb[static_cast<size_t>(id)].lit_standing = bid;

        for (int j = 0; j < 2; ++j) {
            auto& st = arb[static_cast<size_t>(j)];
            if (!st.informed || !rule_places_dark(prof.arb_venue[static_cast<size_t>(j)],
                                                  prof.arb_rule[static_cast<size_t>(j)]))
                continue;
            if (prof.arb_rule[static_cast<size_t>(j)].equilibrium)
                st.dark_bid = equilibrium_dark_bid(j, prof, p, places_lit, informed, rng);
            else
                st.dark_bid = *prof.arb_rule[static_cast<size_t>(j)].fixed_dark;
        }
        // the relay forwards only the highest dark bid on one opportunity
        std::vector<double> dark_bids;
        std::vector<int> dark_owner;
        for (int j = 0; j < 2; ++j)
            if (arb[static_cast<size_t>(j)].dark_bid) {
                dark_bids.push_back(*arb[static_cast<size_t>(j)].dark_bid);
                dark_owner.push_back(j);
            }
        if (auto w = run_dark_auction(dark_bids, rng))
            arb[static_cast<size_t>(dark_owner[*w])].dark_forwarded = true;

        for (int j = 0; j < 2; ++j) {
            const auto& st = arb[static_cast<size_t>(j)];
            if (st.lit_standing)
                lit_pool.push_back({-1, j, Venue::Lit, *st.lit_standing, kArbNonceBase + j, false});
            if (st.dark_forwarded)
                dark_pool.push_back({-1, j, Venue::Dark, *st.dark_bid, kArbNonceBase + j, false});
        }
    }

    Block pass1 = assemble_block(lit_pool, dark_pool, adopted, B, rng);

    // the first arbitrage order executing ahead of the victim wins; all other
    // arbitrage legs fail (contract terminates, fee zero) and vacate slots
    std::optional<int> winner;
    {
        std::optional<size_t> victim_pos;
        for (size_t i = 0; i < pass1.ordered_inclusions.size(); ++i)
            if (pass1.ordered_inclusions[i].tx.is_frontrunnable) victim_pos = i;
        // losing legs can crowd the victim out of the provisional block; the
        // leading arbitrage order still wins, and the rebuilt block (losers
        // vacated) decides whether the insertion lands
        const size_t limit = victim_pos.value_or(pass1.ordered_inclusions.size());
        for (size_t i = 0; i < limit; ++i)
            if (pass1.ordered_inclusions[i].tx.is_arb()) {
                winner = pass1.ordered_inclusions[i].tx.arb_id;
                break;
            }
    }

    bool any_arb_tx = std::any_of(lit_pool.begin(), lit_pool.end(),
                                  [](const PendingTx& t) { return t.is_arb(); }) ||
                      std::any_of(dark_pool.begin(), dark_pool.end(),
                                  [](const PendingTx& t) { return t.is_arb(); });
    Block final_block = pass1;
    if (any_arb_tx) {
        auto keep = [&](const PendingTx& t) {
            return !t.is_arb() || (winner && t.arb_id == *winner);
        };
        std::vector<PendingTx> lit2, dark2;
        for (const auto& t : lit_pool)
            if (keep(t)) lit2.push_back(t);
        for (const auto& t : dark_pool)
            if (keep(t)) dark2.push_back(t);
        final_block = assemble_block(lit2, dark2, adopted, B, rng);
    }

    // score
    double revenue = 0;
    std::optional<size_t> victim_pos;
    std::optional<size_t> winner_pos;
    for (size_t i = 0; i < final_block.ordered_inclusions.size(); ++i) {
        const auto& e = final_block.ordered_inclusions[i];
        revenue += e.paid_fee;
        if (e.tx.is_frontrunnable) victim_pos = i;
        if (e.tx.is_arb()) winner_pos = i;
    }
    out.miner_revenue = revenue;
    out.frontrun = winner && victim_pos && winner_pos && *winner_pos < *victim_pos;
    if (out.frontrun) final_block.frontrun_event = {{*winner, 0}};
    out.block = std::move(final_block);

    const double c = p.arb_profit;
    if (out.frontrun && winner_pos)
        out.arb_payoff[static_cast<size_t>(*winner)] =
            c - out.block.ordered_inclusions[*winner_pos].paid_fee;
    if (prof.user0_venue != Venue::None && victim_pos) {
        double fee = out.block.ordered_inclusions[*victim_pos].paid_fee;
        out.user0_payoff = p.frontrunnable_valuation - fee - (out.frontrun ? c : 0.0);
    }
    return out;
}

namespace {

constexpr uint64_t kChunk = 8192;
constexpr int kMetrics = 5;  // user0, arb1, arb2, miner_revenue, frontrun

struct ChunkSums {
    double sum[kMetrics] = {0, 0, 0, 0, 0};
    double sumsq[kMetrics] = {0, 0, 0, 0, 0};
};

ChunkSums run_chunk(const StrategyProfile& prof, const ModelParams& p, uint64_t seed,
                    uint64_t begin, uint64_t end) {
    ChunkSums cs;
    for (uint64_t e = begin; e < end; ++e) {
        EpisodeRng rng(seed, e);
        EpisodeOutcome o = run_episode(prof, p, rng);
        const double vals[kMetrics] = {o.user0_payoff, o.arb_payoff[0], o.arb_payoff[1],
                                       o.miner_revenue, o.frontrun ? 1.0 : 0.0};
        for (int m = 0; m < kMetrics; ++m) {
            cs.sum[m] += vals[m];
            cs.sumsq[m] += vals[m] * vals[m];
        }
    }
    return cs;
}

}  // namespace

PayoffEstimates estimate_payoffs(const StrategyProfile& prof, const ModelParams& p,
                                 uint64_t n, uint64_t seed, int workers) {
    require_valid(p);
    if (n < 1) throw std::invalid_argument("need at least one episode");
    const uint64_t nchunks = (n + kChunk - 1) / kChunk;
    std::vector<ChunkSums> chunks(nchunks);

    auto work = [&](uint64_t chunk_begin, uint64_t chunk_end) {
        for (uint64_t ci = chunk_begin; ci < chunk_end; ++ci) {
            uint64_t lo = ci * kChunk, hi = std::min(n, lo + kChunk);
            chunks[ci] = run_chunk(prof, p, seed, lo, hi);
        }
    };
    if (workers <= 1 || nchunks <= 1) {
        work(0, nchunks);
    } else {
        const uint64_t w = std::min<uint64_t>(static_cast<uint64_t>(workers), nchunks);
        std::vector<std::thread> threads;
        for (uint64_t t = 0; t < w; ++t) {
            uint64_t lo = nchunks * t / w, hi = nchunks * (t + 1) / w;
            threads.emplace_back(work, lo, hi);
        }
        for (auto& th : threads) th.join();
    }

    // merge in chunk order so the result is worker-count independent
    double sum[kMetrics] = {0}, sumsq[kMetrics] = {0};
    for (const auto& cs : chunks)
        for (int m = 0; m < kMetrics; ++m) {
            sum[m] += cs.sum[m];
            sumsq[m] += cs.sumsq[m];
        }

    auto make = [&](int m) {
        Estimate e;
        const double dn = static_cast<double>(n);
        e.mean = sum[m] / dn;
        if (n >= 2) {
            double var = std::max(0.0, (sumsq[m] - dn * e.mean * e.mean) / (dn - 1.0));
            e.se = std::sqrt(var / dn);
        }
        return e;
    };
    PayoffEstimates pe;
    pe.user0 = make(0);
    pe.arb[0] = make(1);
    pe.arb[1] = make(2);
    pe.miner_revenue = make(3);
    pe.frontrun_frequency = make(4);
    pe.episodes = n;
    return pe;
}

MatrixCalibration calibrate_matrix(const ModelParams& p, uint64_t n, uint64_t seed,
                                   int workers) {
    StrategyProfile prof;
    prof.user0_venue = Venue::Lit;
    prof.arb_venue = {Venue::Lit, Venue::Both};
    prof.alpha = 0.0;
    PayoffEstimates at0 = estimate_payoffs(prof, p, n, seed, workers);
    prof.alpha = 1.0;
    PayoffEstimates at1 = estimate_payoffs(prof, p, n, seed + 1, workers);
    MatrixCalibration cal;
    cal.lit_both_a1_at0 = at0.arb[0].mean;
    cal.lit_both_a2_at0 = at0.arb[1].mean;
    cal.lit_both_a1_at1 = at1.arb[0].mean;
    cal.lit_both_a2_at1 = at1.arb[1].mean;
    return cal;
}

namespace {

StrategyProfile equilibrium_profile(const EquilibriumReport& rep) {
    StrategyProfile prof;
    prof.alpha = rep.alpha_star;
    prof.user0_venue = rep.user0_venue;
    prof.arb_venue = {rep.arb_venues.first, rep.arb_venues.second};
    return prof;
}

}  // namespace

Certificate verify_equilibrium(const EquilibriumReport& rep, const ModelParams& p,
                               const VerifyOptions& opts) {
    require_valid(p);
    Certificate cert;
    cert.fee_grid_points = opts.fee_grid_points;
    cert.abs_tol = opts.abs_tol.value_or(
        std::max(p.v_bm2() - p.v_bm1(), p.v_bm1() - p.v_b()));

    const StrategyProfile base = equilibrium_profile(rep);
    cert.baseline = estimate_payoffs(base, p, opts.episodes, opts.seed, opts.workers);

    std::vector<double> grid;
    for (int i = 0; i < opts.fee_grid_points; ++i)
        grid.push_back(p.arb_profit * i / (opts.fee_grid_points - 1));

    struct Job {
        StrategyProfile prof;
        std::string agent;
        std::string desc;
        int metric;  // 0 user0, 1 arb1, 2 arb2
    };
    std::vector<Job> jobs;

    // user0: venue x fee menu (grid plus the three inclusion floors)
    std::vector<double> user_fees = grid;
    user_fees.push_back(p.v_b());
    user_fees.push_back(p.v_bm1());
    user_fees.push_back(p.v_bm2());
    for (Venue v : {Venue::Lit, Venue::Dark}) {
        for (double f : user_fees) {
            Job jb{base, "user0", "", 0};
            jb.prof.user0_venue = v;
            jb.prof.user0_fee = f;
            std::ostringstream os;
            os << "venue=" << to_string(v) << " fee=" << f;
            jb.desc = os.str();
            jobs.push_back(std::move(jb));
        }
    }
    {
        Job jb{base, "user0", "venue=None", 0};
        jb.prof.user0_venue = Venue::None;
        jb.prof.user0_fee.reset();
        jobs.push_back(std::move(jb));
    }

    // arbitrageurs: venue switches (equilibrium bidding re-derived for the new
    // pair) and fixed-fee deviations within the equilibrium venue
    for (int a = 0; a < 2; ++a) {
        std::string name = a == 0 ? "arb1" : "arb2";
        for (Venue v : {Venue::Dark, Venue::Lit, Venue::Both}) {
            if (v == base.arb_venue[static_cast<size_t>(a)]) continue;
            Job jb{base, name, std::string("venue=") + to_string(v), a + 1};
            jb.prof.arb_venue[static_cast<size_t>(a)] = v;
            jobs.push_back(std::move(jb));
        }
        for (double f : grid) {
            Job jb{base, name, "", a + 1};
            ArbBidRule rule;
            rule.equilibrium = false;
            Venue mine = base.arb_venue[static_cast<size_t>(a)];
            if (has_dark(mine)) rule.fixed_dark = f;
            if (has_lit(mine)) rule.fixed_lit = f;
            jb.prof.arb_rule[static_cast<size_t>(a)] = rule;
            std::ostringstream os;
            os << "fixed fee=" << f;
            jb.desc = os.str();
            jobs.push_back(std::move(jb));
        }
    }

    const double base_means[3] = {cert.baseline.user0.mean, cert.baseline.arb[0].mean,
                                  cert.baseline.arb[1].mean};
    const double base_ses[3] = {cert.baseline.user0.se.value_or(0.0),
                                cert.baseline.arb[0].se.value_or(0.0),
                                cert.baseline.arb[1].se.value_or(0.0)};

    cert.passed = true;
    double worst_gain = -1e300;
    for (size_t i = 0; i < jobs.size(); ++i) {
        const Job& jb = jobs[i];
        PayoffEstimates est =
            estimate_payoffs(jb.prof, p, opts.episodes, opts.seed + 17 + i, opts.workers);
        const Estimate* metric[3] = {&est.user0, &est.arb[0], &est.arb[1]};
        DeviationRecord rec;
        rec.agent = jb.agent;
        rec.description = jb.desc;
        rec.mean = metric[jb.metric]->mean;
        rec.se = std::sqrt(base_ses[jb.metric] * base_ses[jb.metric] +
                           metric[jb.metric]->se.value_or(0.0) * metric[jb.metric]->se.value_or(0.0));
        rec.gain = rec.mean - base_means[jb.metric];
        if (rec.gain > worst_gain) {
            worst_gain = rec.gain;
            cert.worst = rec;
        }
        if (rec.gain > std::max(3.0 * rec.se, cert.abs_tol)) {
            cert.passed = false;
            cert.profitable.push_back(rec);
        }
    }

    // analytic miner migration check at alpha* +/- delta
    const double delta = 1e-3;
    ThresholdSet th = thresholds(p);
    MinerRevenues star = rep.revenues;
    cert.r_dark_star = star.r_dark;
    cert.r_lit_star = star.r_lit;
    const double mtol = 1e-9 * (std::fabs(star.r_dark) + 1.0);
    bool up_ok = true, down_ok = true;
    if (rep.alpha_star + delta <= 1.0) {
        cert.r_dark_up = miner_revenues(rep.alpha_star + delta, p, th).r_dark + rep.transfer_theta;
        // a lit miner migrating at alpha*+delta must not beat staying put
        up_ok = cert.r_dark_up <= star.r_lit + mtol;
    }
    if (rep.alpha_star - delta >= 0.0) {
        cert.r_lit_down = miner_revenues(rep.alpha_star - delta, p, th).r_lit;
        down_ok = cert.r_lit_down <= star.r_dark + mtol;
    }
    cert.miner_check_passed = up_ok && down_ok;
    if (!cert.miner_check_passed) cert.passed = false;
    return cert;
}

}  // namespace mevsim
