#include "mevsim/mixed_bid.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace mevsim {

namespace {

void check_support(const ModelParams& p) {
    if (p.arb_profit == p.v_bm2())
        throw std::domain_error("degenerate mixed-fee support: c == v[B-2]");
    if (p.detect_prob <= 0.0 || p.detect_prob >= 1.0)
        throw std::domain_error("mixed-fee distribution needs p in (0,1)");
}

}  // namespace

MixedFeeSupport mixed_fee_support(const ModelParams& params) {
    check_support(params);
    const double v = params.v_bm2();
    return {v, params.detect_prob * (params.arb_profit - v) + v};
}

double mixed_strategy_density(double g, const ModelParams& params) {
    auto sup = mixed_fee_support(params);
    if (g < sup.lo || g > sup.hi) return 0.0;
    const double p = params.detect_prob;
    const double v = params.v_bm2();
    const double cv = params.arb_profit - v;
    const double u = (g - v) / cv;
    const double bracket = 1.0 - u;
    return (1.0 - p) / p / (bracket * bracket * cv);
}

double mixed_strategy_cdf(double g, const ModelParams& params) {
    auto sup = mixed_fee_support(params);
    if (g <= sup.lo) return 0.0;
    if (g >= sup.hi) return 1.0;
    const double p = params.detect_prob;
    const double v = params.v_bm2();
    const double c = params.arb_profit;
    double F = (1.0 - p) / p * (g - v) / (c - g);
    return std::clamp(F, 0.0, 1.0);
}

double mixed_strategy_quantile(double u, const ModelParams& params) {
    check_support(params);
    if (u < 0.0 || u > 1.0) throw std::domain_error("quantile argument outside [0,1]");
    const double p = params.detect_prob;
    const double k = (1.0 - p) / p;
    const double v = params.v_bm2();
    const double c = params.arb_profit;
    return (u * c + k * v) / (u + k);
}

double sample_mixed_fee(EpisodeRng& rng, const ModelParams& params) {
    return mixed_strategy_quantile(rng.uniform(), params);
}

namespace {

double simpson(double (*f)(double, const ModelParams&), const ModelParams& p,
               double a, double m, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(double (*f)(double, const ModelParams&), const ModelParams& p,
                double a, double m, double b, double fa, double fm, double fb,
                double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm, p), frm = f(rm, p);
    const double left = simpson(f, p, a, lm, m, fa, flm, fm);
    const double right = simpson(f, p, m, rm, b, fm, frm, fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, p, a, lm, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptive(f, p, m, rm, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

}  // namespace

double integrate(double (*f)(double, const ModelParams&), const ModelParams& params,
                 double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a, params), fm = f(m, params), fb = f(b, params);
    const double whole = simpson(f, params, a, m, b, fa, fm, fb);
    return adaptive(f, params, a, m, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace mevsim
