#include "mevsim/params.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mevsim {

const char* to_string(ParamError e) {
    switch (e) {
        case ParamError::NonMonotoneValuations: return "NonMonotoneValuations";
        case ParamError::GammaOutOfRange: return "GammaOutOfRange";
        case ParamError::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
        case ParamError::CapacityTooSmall: return "CapacityTooSmall";
    }
    return "?";
}

std::vector<ParamError> validate(const ModelParams& p) {
    std::vector<ParamError> errs;
    const int B = p.block_capacity;
    // Indices B-2 .. B+1 must all exist.
    if (B < 4 || p.user_valuations.size() != static_cast<size_t>(B + 1)) {
        errs.push_back(ParamError::CapacityTooSmall);
        return errs;  // index-dependent checks below would be unsafe
    }
    bool monotone = true;
    for (size_t i = 0; i + 1 < p.user_valuations.size(); ++i)
        if (!(p.user_valuations[i] > p.user_valuations[i + 1])) monotone = false;
    if (p.user_valuations.back() <= 0) monotone = false;
    if (!monotone) errs.push_back(ParamError::NonMonotoneValuations);

    if (!(p.detect_prob >= 0.0 && p.detect_prob <= 1.0))
        errs.push_back(ParamError::ProbabilityOutOfRange);
    if (!(p.auction_continuation > 0.0 && p.auction_continuation <= 1.0))
        errs.push_back(ParamError::ProbabilityOutOfRange);

    if (monotone) {
        // gamma > 1 and gamma*v[B-2] < c (payoff-matrix condition).
        if (!(p.lit_fee_multiplier > 1.0 &&
              p.lit_fee_multiplier * p.v_bm2() < p.arb_profit))
            errs.push_back(ParamError::GammaOutOfRange);
        // v0 > v[B-2], c > v[B-2] are folded into the ordering check family.
        if (!(p.frontrunnable_valuation > p.v_bm2()) || !(p.arb_profit > p.v_bm2()))
            errs.push_back(ParamError::NonMonotoneValuations);
    }
    if (!(p.min_increment > 0.0)) errs.push_back(ParamError::GammaOutOfRange);
    return errs;
}

bool assumption1_smallness_holds(const ModelParams& p) {
    return p.v_bm2() - p.v_bm1() <= p.smallness_kappa * p.v_bm1();
}

const ModelParams& require_valid(const ModelParams& p) {
    auto errs = validate(p);
    if (!errs.empty()) {
        std::ostringstream os;
        os << "invalid model parameters:";
        for (auto e : errs) os << ' ' << to_string(e);
        throw std::invalid_argument(os.str());
    }
    return p;
}

double fee_floor(FeeScenario scenario, const ModelParams& p) {
    require_valid(p);
    switch (scenario) {
        case FeeScenario::NoFrontrunnableUser: return p.v_b();
        case FeeScenario::FrontrunnableNoArbSpace: return p.v_bm1();
        case FeeScenario::FrontrunnableWithArbSpace: return p.v_bm2();
    }
    throw std::logic_error("bad scenario");
}

namespace {

const std::set<std::string> kKnownKeys = {
    "block_capacity",     "user_valuations",      "frontrunnable_valuation",
    "arb_profit",         "detect_prob",          "min_increment",
    "auction_continuation", "lit_fee_multiplier", "smallness_kappa",
};

}  // namespace

ModelParams params_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("params JSON must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!kKnownKeys.count(it.key()))
            throw std::invalid_argument("unknown parameter key: " + it.key());
    ModelParams p;
    p.block_capacity = j.at("block_capacity").get<int>();
    p.user_valuations = j.at("user_valuations").get<std::vector<double>>();
    p.frontrunnable_valuation = j.at("frontrunnable_valuation").get<double>();
    p.arb_profit = j.at("arb_profit").get<double>();
    p.detect_prob = j.at("detect_prob").get<double>();
    p.min_increment = j.at("min_increment").get<double>();
    p.auction_continuation = j.at("auction_continuation").get<double>();
    p.lit_fee_multiplier = j.at("lit_fee_multiplier").get<double>();
    if (j.contains("smallness_kappa")) p.smallness_kappa = j.at("smallness_kappa").get<double>();
    return p;
}

ModelParams params_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open params file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return params_from_json_text(ss.str());
}

std::string params_to_json_text(const ModelParams& p) {
    nlohmann::json j;
    j["block_capacity"] = p.block_capacity;
    j["user_valuations"] = p.user_valuations;
    j["frontrunnable_valuation"] = p.frontrunnable_valuation;
    j["arb_profit"] = p.arb_profit;
    j["detect_prob"] = p.detect_prob;
    j["min_increment"] = p.min_increment;
    j["auction_continuation"] = p.auction_continuation;
    j["lit_fee_multiplier"] = p.lit_fee_multiplier;
    j["smallness_kappa"] = p.smallness_kappa;
    return j.dump(2);
}

double implied_gamma(const ModelParams& p) {
    const double lam = p.auction_continuation;
    return 1.0 + p.min_increment * (1.0 / lam - 1.0) / p.v_bm2();
}

}  // namespace mevsim
