#pragma once

#include "mevsim/params.hpp"
#include "mevsim/rng.hpp"

namespace mevsim {

// Equilibrium mixed fee distribution for the Dark/Dark arbitrageur regime:
//   P(g) = (1-p)/p * 1 / ((1 - (g-v)/(c-v))^2 (c-v)),  v = v[B-2],
// supported on [v, p(c-v)+v].

struct MixedFeeSupport {
    double lo;
    double hi;
};

MixedFeeSupport mixed_fee_support(const ModelParams& params);

// Density value at g (0 outside the support). Throws std::domain_error when
// c == v[B-2] (degenerate support).
double mixed_strategy_density(double g, const ModelParams& params);

// CDF F(g) = (1-p)/p * (g-v)/(c-g), clipped to [0,1].
double mixed_strategy_cdf(double g, const ModelParams& params);

// Inverse CDF at u in [0,1]: g = (u*c + k*v)/(u + k), k = (1-p)/p.
double mixed_strategy_quantile(double u, const ModelParams& params);

double sample_mixed_fee(EpisodeRng& rng, const ModelParams& params);

// Adaptive Simpson integral of f over [a,b] to tolerance tol.
double integrate(double (*f)(double, const ModelParams&), const ModelParams& params,
                 double a, double b, double tol);

}  // namespace mevsim
