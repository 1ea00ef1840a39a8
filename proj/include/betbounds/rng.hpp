#pragma once
// Counter-based splittable RNG for reproducible Monte Carlo.
//
// A (seed, replicate_index) pair names one stream; streams are decorrelated by
// hashing the pair into the initial counter, so parallel replicates never
// share state. The per-step output is the SplitMix64 finalizer applied to a
// Weyl sequence, which passes standard statistical batteries and is
// bit-reproducible across platforms.

#include <cstdint>
#include <cmath>

namespace betbounds {

struct Seed {
    std::uint64_t seed = 0;
    std::uint64_t replicate_index = 0;

    Seed() = default;
    Seed(std::uint64_t s, std::uint64_t r = 0) : seed(s), replicate_index(r) {}
    Seed replicate(std::uint64_t r) const { return Seed{seed, r}; }
};

class CounterRng {
public:
    explicit CounterRng(Seed s) {
        state_ = mix(s.seed + GOLDEN) ^ mix(s.replicate_index * GOLDEN + 0x1F123BB5159A55E5ULL);
    }

    std::uint64_t next_u64() {
        state_ += GOLDEN;
        return mix(state_);
    }

    // uniform on [0,1) with 53 random bits
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bernoulli(double p) { return next_unit() < p; }

    // standard normal via the polar (Marsaglia) method; exact rejection, no tables
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_unit() - 1.0;
            v = 2.0 * next_unit() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    // Gamma(shape, 1) by Marsaglia-Tsang squeeze; shape < 1 boosted through
    // the Gamma(shape+1) * U^{1/shape} identity.
    double next_gamma(double shape) {
        if (shape < 1.0) {
            const double u = next_unit();
            return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = next_normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = next_unit();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double next_beta(double a, double b) {
        const double ga = next_gamma(a);
        const double gb = next_gamma(b);
        const double x = ga / (ga + gb);
        if (x < 0.0) return 0.0;
        if (x > 1.0) return 1.0;
        return x;
    }

    // uniform integer in [0, bound) by rejection (unbiased)
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

private:
    static constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace betbounds
