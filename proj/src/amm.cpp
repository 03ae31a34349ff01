#include "mevsim/amm.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mevsim {

namespace {

constexpr double kFee = 0.997;

void check_pool(const PoolState& p) {
    if (!(p.reserve_in > 0.0) || !(p.reserve_out > 0.0))
        throw std::invalid_argument("pool reserves must be positive");
}

}  // namespace

double swap_output(const PoolState& pool, double x) {
    check_pool(pool);
    if (x < 0.0) throw std::invalid_argument("swap input must be nonnegative");
    return kFee * x * pool.reserve_out / (pool.reserve_in + kFee * x);
}

PoolState apply_swap(const PoolState& pool, double x) {
    double out = swap_output(pool, x);
    return {pool.reserve_in + x, pool.reserve_out - out};
}

bool victim_constraint(const PoolState& pool, const VictimOrder& victim, double x,
                       ConstraintVariant variant) {
    check_pool(pool);
    const double r1 = pool.reserve_in, r2 = pool.reserve_out;
    const double v = victim.input_amount;
    const double quote_r2 = r2 - kFee * x * r2 / (r1 + kFee * x);
    const double base = variant == ConstraintVariant::PaperVerbatim ? r1 + x : r1 + kFee * x;
    const double victim_out = v * kFee * quote_r2 / (base + kFee * v);
    return victim_out >= victim.min_output;
}

MaxInputResult max_input(const PoolState& pool, const VictimOrder& victim) {
    check_pool(pool);
    const double r1 = pool.reserve_in, r2 = pool.reserve_out;
    const double v = victim.input_amount, m = victim.min_output;
    MaxInputResult res;
    if (!victim_constraint(pool, victim, 0.0)) return res;  // binds immediately

    const double t = std::sqrt(9000000.0 * r1 * r1 * m + 3976036000000.0 * r1 * r2 * v -
                               5964054000.0 * r1 * m * v + 988053892081.0 * m * v * v);
    res.closed_form = t / (1994000.0 * std::sqrt(m)) - (1997.0 / 1994.0) * r1 - 0.4985 * v;
    res.closed_form_printed = 5.01505e-7 * t / std::sqrt(m) - 1.0015 * r1 - 0.4985 * v;

    // bisection on the single-crossing constraint
    double lo = 0.0, hi = std::max(r1, 1.0);
    int guard = 0;
    while (victim_constraint(pool, victim, hi) && guard++ < 200) {
        lo = hi;
        hi *= 2.0;
    }
    if (guard >= 200) throw std::runtime_error("victim constraint never violated");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (victim_constraint(pool, victim, mid) ? lo : hi) = mid;
        if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
    }
    res.bisection = lo;  // the endpoint where the constraint still holds
    res.agree = std::fabs(res.closed_form - res.bisection) <=
                1e-6 * std::max(1.0, std::fabs(res.bisection));
    return res;
}

ArbitragePlan arbitrage_revenue(const PoolState& pool, const VictimOrder& victim, double x) {
    if (!victim_constraint(pool, victim, x))
        throw std::invalid_argument("frontrun size violates the victim constraint");
    ArbitragePlan plan;
    plan.front_input = x;
    plan.front_output = swap_output(pool, x);
    PoolState after_front = apply_swap(pool, x);
    PoolState after_victim = apply_swap(after_front, victim.input_amount);
    PoolState reverse{after_victim.reserve_out, after_victim.reserve_in};
    plan.back_output = swap_output(reverse, plan.front_output);
    plan.revenue = plan.back_output - plan.front_input;
    return plan;
}

FrontrunSearch best_frontrun(const PoolState& pool, const VictimOrder& victim) {
    FrontrunSearch fs;
    MaxInputResult mi = max_input(pool, victim);
    fs.max_input = mi.bisection;
    if (fs.max_input <= 0.0) return fs;
    fs.revenue_at_max_input = arbitrage_revenue(pool, victim, fs.max_input).revenue;

    auto rev = [&](double x) { return arbitrage_revenue(pool, victim, x).revenue; };

    const int n = 257;
    std::vector<double> val(n);
    int argmax = 0;
    for (int i = 0; i < n; ++i) {
        val[static_cast<size_t>(i)] = rev(fs.max_input * i / (n - 1));
        if (val[static_cast<size_t>(i)] > val[static_cast<size_t>(argmax)]) argmax = i;
    }
    // unimodal scan: nondecreasing up to the peak, nonincreasing after
    bool unimodal = true;
    const double wiggle = 1e-12 * (std::fabs(val[static_cast<size_t>(argmax)]) + 1.0);
    for (int i = 1; i <= argmax; ++i)
        if (val[static_cast<size_t>(i)] < val[static_cast<size_t>(i - 1)] - wiggle) unimodal = false;
    for (int i = argmax + 1; i < n; ++i)
        if (val[static_cast<size_t>(i)] > val[static_cast<size_t>(i - 1)] + wiggle) unimodal = false;

    double lo, hi;
    if (unimodal) {
        lo = fs.max_input * std::max(0, argmax - 1) / (n - 1);
        hi = fs.max_input * std::min(n - 1, argmax + 1) / (n - 1);
    } else {
        // dense grid, then refine the best cell
        const int dense = 100000;
        int best = 0;
        double bv = rev(0.0);
        for (int i = 1; i <= dense; ++i) {
            double x = fs.max_input * i / dense;
            double r = rev(x);
            if (r > bv) {
                bv = r;
                best = i;
            }
        }
        lo = fs.max_input * std::max(0, best - 1) / dense;
        hi = fs.max_input * std::min(dense, best + 1) / dense;
    }

    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = rev(x1), f2 = rev(x2);
    for (int i = 0; i < 200 && b - a > 1e-12 * std::max(1.0, fs.max_input); ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = rev(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = rev(x1);
        }
    }
    fs.best_x = 0.5 * (a + b);
    fs.best_revenue = rev(fs.best_x);
    // the endpoints are candidates the interior search can miss
    if (fs.revenue_at_max_input > fs.best_revenue) {
        fs.best_x = fs.max_input;
        fs.best_revenue = fs.revenue_at_max_input;
    }
    if (0.0 > fs.best_revenue) {
        fs.best_x = 0.0;
        fs.best_revenue = 0.0;
    }
    fs.frontrunnable = fs.best_revenue > 0.0;
    return fs;
}

}  // namespace mevsim
