#pragma once

#include <cstdint>
#include <random>

namespace mevsim {

// splitmix64 step; used to derive independent per-episode seeds so that
// parallel and serial runs of the same (seed, episode-count) are identical.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// One RNG stream per episode, keyed by (seed, episode index).
class EpisodeRng {
public:
    EpisodeRng(uint64_t seed, uint64_t episode) {
        uint64_t s = seed ^ (0x517cc1b727220a95ULL * (episode + 1));
        // Decorrelate nearby (seed, episode) pairs before seeding the engine.
        uint64_t a = splitmix64(s);
        uint64_t b = splitmix64(s);
        std::seed_seq seq{static_cast<uint32_t>(a), static_cast<uint32_t>(a >> 32),
                          static_cast<uint32_t>(b), static_cast<uint32_t>(b >> 32)};
        engine_.seed(seq);
    }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    bool bernoulli(double prob) { return uniform() < prob; }

    // P(r = k) = (1-lambda)^{k-1} lambda, k >= 1.
    int geometric(double lambda) {
        if (lambda >= 1.0) return 1;
        int r = 1;
        while (!bernoulli(lambda)) ++r;
        return r;
    }

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        return std::uniform_int_distribution<uint64_t>(0, n - 1)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace mevsim
