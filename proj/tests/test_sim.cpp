#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "mevsim/sim.hpp"

using namespace mevsim;

namespace {

PendingTx user_tx(int owner, Venue venue, double fee, int nonce, bool frontrunnable = false) {
    PendingTx t;
    t.owner = owner;
    t.venue = venue;
    t.fee = fee;
    t.nonce = nonce;
    t.is_frontrunnable = frontrunnable;
    return t;
}

PendingTx arb_tx(int arb_id, Venue venue, double fee, int nonce) {
    PendingTx t;
    t.owner = -1;
    t.arb_id = arb_id;
    t.venue = venue;
    t.fee = fee;
    t.nonce = nonce;
    return t;
}

StrategyProfile profile(double alpha, Venue user0, Venue a1, Venue a2) {
    StrategyProfile prof;
    prof.alpha = alpha;
    prof.user0_venue = user0;
    prof.arb_venue = {a1, a2};
    return prof;
}

}  // namespace

TEST_CASE("auction round counts follow the geometric law") {
    ModelParams p = fixtures::unit_params();
    EpisodeRng rng(1, 0);
    CHECK_THROWS(sample_auction_rounds(rng, 0.0));
    for (int i = 0; i < 100; ++i) CHECK(sample_auction_rounds(rng, 1.0) == 1);
    const int n = 1000000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < n; ++i) {
        double r = sample_auction_rounds(rng, 0.5);
        sum += r;
        sumsq += r * r;
    }
    double mean = sum / n;
    double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::fabs(mean - 2.0) <= 3.0 * se);
    (void)p;
}

TEST_CASE("lit auction edge cases") {
    ModelParams p = fixtures::unit_params();
    EpisodeRng rng(2, 0);

    CHECK_FALSE(run_lit_auction({}, p, rng, 8.0).high_bidder.has_value());

    LitBidder solo{.id = 0, .escalate = true};
    auto res = run_lit_auction({solo}, p, rng, 8.0);
    REQUIRE(res.high_bidder.has_value());
    CHECK(res.high_bid == doctest::Approx(8.0));
}

TEST_CASE("two escalating bidders trace the increment ladder") {
    ModelParams p = fixtures::unit_params();
    p.auction_continuation = 0.5;
    p.min_increment = 0.1;
    LitBidder b0{.id = 0, .escalate = true};
    LitBidder b1{.id = 1, .escalate = true};

    // find a seed whose first geometric draw is exactly three rounds
    uint64_t seed = 0;
    for (uint64_t s = 0; s < 10000; ++s) {
        EpisodeRng probe(s, 0);
        if (probe.geometric(0.5) == 3) {
            seed = s;
            break;
        }
    }
    EpisodeRng rng(seed, 0);
    auto res = run_lit_auction({b0, b1}, p, rng, 8.0);
    // bids 8.0, 8.1, 8.2 alternating; final standing pair is {8.1, 8.2}
    REQUIRE(res.high_bidder.has_value());
    CHECK(res.high_bid == doctest::Approx(8.2));
    REQUIRE(res.standing.size() == 2);
    std::set<double> bids{res.standing[0].second, res.standing[1].second};
    CHECK(bids.count(8.2) == 1);
    CHECK(*bids.begin() == doctest::Approx(8.1));
}

TEST_CASE("sealed-bid auction picks the high bid and breaks ties uniformly") {
    EpisodeRng rng(3, 0);
    CHECK(run_dark_auction({2.0, 1.5}, rng) == 0);
    CHECK(run_dark_auction({1.0}, rng) == 0);
    CHECK_FALSE(run_dark_auction({}, rng).has_value());

    const int n = 100000;
    int first = 0;
    for (int i = 0; i < n; ++i)
        if (run_dark_auction({2.0, 2.0}, rng) == 0) ++first;
    double f = static_cast<double>(first) / n;
    CHECK(std::fabs(f - 0.5) <= 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("block assembly: private segment first, visibility by adoption") {
    EpisodeRng rng(4, 0);
    std::vector<PendingTx> lit{user_tx(1, Venue::Lit, 9, 1), user_tx(2, Venue::Lit, 3, 2)};
    std::vector<PendingTx> dark{user_tx(3, Venue::Dark, 5, 3)};

    Block b = assemble_block(lit, dark, true, 2, rng);
    REQUIRE(b.ordered_inclusions.size() == 2);
    CHECK(b.ordered_inclusions[0].tx.venue == Venue::Dark);
    CHECK(b.ordered_inclusions[0].paid_fee == doctest::Approx(5));
    CHECK(b.ordered_inclusions[1].tx.venue == Venue::Lit);
    CHECK(b.ordered_inclusions[1].paid_fee == doctest::Approx(9));

    Block nb = assemble_block(lit, dark, false, 2, rng);
    REQUIRE(nb.ordered_inclusions.size() == 2);
    CHECK(nb.ordered_inclusions[0].paid_fee == doctest::Approx(9));
    CHECK(nb.ordered_inclusions[1].paid_fee == doctest::Approx(3));
}

TEST_CASE("dual-venue copies deduplicate to the higher-fee copy") {
    EpisodeRng rng(5, 0);
    std::vector<PendingTx> lit{user_tx(1, Venue::Lit, 4, 7)};
    std::vector<PendingTx> dark{user_tx(1, Venue::Dark, 6, 7)};
    Block b = assemble_block(lit, dark, true, 3, rng);
    REQUIRE(b.ordered_inclusions.size() == 1);
    CHECK(b.ordered_inclusions[0].tx.venue == Venue::Dark);
    CHECK(b.ordered_inclusions[0].paid_fee == doctest::Approx(6));

    // a tie keeps the public copy
    dark[0].fee = 4;
    Block t = assemble_block(lit, dark, true, 3, rng);
    REQUIRE(t.ordered_inclusions.size() == 1);
    CHECK(t.ordered_inclusions[0].tx.venue == Venue::Lit);
}

TEST_CASE("assembled blocks satisfy the structural invariants under fuzzing") {
    EpisodeRng rng(6, 0);
    for (int iter = 0; iter < 300; ++iter) {
        std::vector<PendingTx> lit, dark;
        const int n_lit = 1 + static_cast<int>(rng.below(8));
        const int n_dark = static_cast<int>(rng.below(5));
        for (int i = 0; i < n_lit; ++i)
            lit.push_back(user_tx(i, Venue::Lit, 1.0 + 9.0 * rng.uniform(),
                                  static_cast<int>(rng.below(10))));
        for (int i = 0; i < n_dark; ++i)
            dark.push_back(user_tx(100 + i, Venue::Dark, 1.0 + 9.0 * rng.uniform(),
                                   static_cast<int>(rng.below(10))));
        const bool adopted = rng.below(2) == 1;
        const int cap = 1 + static_cast<int>(rng.below(5));
        Block b = assemble_block(lit, dark, adopted, cap, rng);

        CHECK(b.ordered_inclusions.size() <= static_cast<size_t>(cap));
        std::set<int> nonces;
        bool seen_lit = false;
        double prev_fee[2] = {1e18, 1e18};
        for (const auto& e : b.ordered_inclusions) {
            CHECK(nonces.insert(e.tx.nonce).second);
            if (e.tx.venue == Venue::Lit) seen_lit = true;
            // dark entries never follow a lit entry
            if (e.tx.venue == Venue::Dark) CHECK_FALSE(seen_lit);
            int seg = e.tx.venue == Venue::Dark ? 0 : 1;
            CHECK(e.paid_fee <= prev_fee[seg] + 1e-12);
            prev_fee[seg] = e.paid_fee;
            if (!adopted) CHECK(e.tx.venue == Venue::Lit);
        }
    }
}

TEST_CASE("episode fees are conserved into miner revenue") {
    ModelParams p = fixtures::main_params();
    StrategyProfile prof = profile(0.5, Venue::Lit, Venue::Both, Venue::Both);
    for (uint64_t e = 0; e < 200; ++e) {
        EpisodeRng rng(11, e);
        EpisodeOutcome out = run_episode(prof, p, rng);
        double total = 0;
        for (const auto& entry : out.block.ordered_inclusions) total += entry.paid_fee;
        CHECK(out.miner_revenue == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("full adoption with a private user order is frontrun-proof") {
    ModelParams p = fixtures::main_params();
    StrategyProfile prof = profile(1.0, Venue::Dark, Venue::Dark, Venue::Dark);
    for (uint64_t e = 0; e < 100; ++e) {
        EpisodeRng rng(12, e);
        EpisodeOutcome out = run_episode(prof, p, rng);
        CHECK_FALSE(out.frontrun);
        CHECK(out.user0_payoff == doctest::Approx(p.frontrunnable_valuation - p.v_bm1()));
        CHECK(out.arb_payoff[0] == doctest::Approx(0.0));
        CHECK(out.arb_payoff[1] == doctest::Approx(0.0));
    }
}

TEST_CASE("dark-only arbitrageurs earn nothing without adoption") {
    ModelParams p = fixtures::main_params();
    StrategyProfile prof = profile(0.0, Venue::Lit, Venue::Dark, Venue::Dark);
    for (uint64_t e = 0; e < 100; ++e) {
        EpisodeRng rng(13, e);
        EpisodeOutcome out = run_episode(prof, p, rng);
        CHECK(out.arb_payoff[0] == doctest::Approx(0.0));
        CHECK(out.arb_payoff[1] == doctest::Approx(0.0));
        CHECK_FALSE(out.frontrun);
    }
}

TEST_CASE("Monte Carlo means match the analytic matrix cells") {
    ModelParams p = fixtures::fine_params();
    const uint64_t n = 200000;
    const double q = 0.75;
    const double cv = p.arb_profit - p.v_bm2();                            // c - v
    const double cgv = p.arb_profit - p.lit_fee_multiplier * p.v_bm2();    // c - gamma v

    SUBCASE("both dark") {
        double alpha = 0.5;
        auto est = estimate_payoffs(profile(alpha, Venue::Lit, Venue::Dark, Venue::Dark), p, n,
                                    21, 4);
        const double cell = alpha * p.detect_prob * (1.0 - p.detect_prob) * cv;
        for (int j = 0; j < 2; ++j)
            CHECK(std::fabs(est.arb[static_cast<size_t>(j)].mean - cell) <=
                  3.0 * *est.arb[static_cast<size_t>(j)].se);
    }
    SUBCASE("both lit") {
        auto est = estimate_payoffs(profile(0.5, Venue::Lit, Venue::Lit, Venue::Lit), p, n, 22, 4);
        const double cell = 0.5 * cgv * q;
        for (int j = 0; j < 2; ++j)
            CHECK(std::fabs(est.arb[static_cast<size_t>(j)].mean - cell) <=
                  3.0 * *est.arb[static_cast<size_t>(j)].se);
    }
    SUBCASE("both venues covered") {
        double alpha = 0.2;
        auto est = estimate_payoffs(profile(alpha, Venue::Lit, Venue::Both, Venue::Both), p, n,
                                    23, 4);
        const double cell = 0.5 * (1.0 - alpha) * cgv * q;
        for (int j = 0; j < 2; ++j)
            CHECK(std::fabs(est.arb[static_cast<size_t>(j)].mean - cell) <=
                  3.0 * *est.arb[static_cast<size_t>(j)].se);
        // the insertion happens whenever either arbitrageur detects
        CHECK(std::fabs(est.frontrun_frequency.mean - q) <= 3.0 * *est.frontrun_frequency.se);
    }
    SUBCASE("private user payoff is linear in adoption") {
        double alpha = 0.37;
        auto est = estimate_payoffs(profile(alpha, Venue::Dark, Venue::Both, Venue::Both), p, n,
                                    24, 4);
        const double expect = alpha * (p.frontrunnable_valuation - p.v_bm1());
        CHECK(std::fabs(est.user0.mean - expect) <= 3.0 * *est.user0.se);
    }
}

TEST_CASE("estimates are deterministic and worker-count independent") {
    ModelParams p = fixtures::unit_params();
    StrategyProfile prof = profile(0.4, Venue::Lit, Venue::Both, Venue::Both);
    auto a = estimate_payoffs(prof, p, 20000, 77, 1);
    auto b = estimate_payoffs(prof, p, 20000, 77, 4);
    CHECK(a.user0.mean == b.user0.mean);
    CHECK(a.arb[0].mean == b.arb[0].mean);
    CHECK(a.arb[1].mean == b.arb[1].mean);
    CHECK(a.miner_revenue.mean == b.miner_revenue.mean);
    CHECK(a.frontrun_frequency.mean == b.frontrun_frequency.mean);
    auto c = estimate_payoffs(prof, p, 20000, 78, 1);
    CHECK(a.user0.mean != c.user0.mean);
}

TEST_CASE("the certificate rejects a non-equilibrium profile") {
    ModelParams p = fixtures::main_params();
    EquilibriumReport rep = spe(p);
    rep.user0_venue = Venue::Dark;  // corrupt: dark submission at low adoption
    rep.alpha_star = 0.05;
    VerifyOptions opts;
    opts.episodes = 4000;
    opts.seed = 5;
    opts.workers = 4;
    opts.fee_grid_points = 8;
    Certificate cert = verify_equilibrium(rep, p, opts);
    CHECK_FALSE(cert.passed);
    REQUIRE(!cert.profitable.empty());
    bool user0_lit_gain = false;
    for (const auto& d : cert.profitable)
        if (d.agent == "user0" && d.gain > 1.0) user0_lit_gain = true;
    CHECK(user0_lit_gain);
}
