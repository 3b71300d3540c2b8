#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace shadowtouch {

/// splitmix64 step; used for seeding and for deriving independent substream
/// seeds from (seed, salt) pairs so every stage gets its own stream.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + salt * 0x9e3779b97f4a7c15ULL);
    splitmix64(s);
    return splitmix64(s);
}

/// xoshiro256++ with splitmix64 state initialization. Deterministic and
/// platform-independent; all randomness in the project flows through this.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via inverse-CDF transform.
    double normal() { return probit(next_double()); }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    /// Inverse standard normal CDF (Acklam's rational approximation,
    /// relative error < 1.2e-9). Input clamped away from {0, 1}.
    static double probit(double p);

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> state_{};
};

/// Precomputed integer Gaussian offsets for pixel noise: 65536 inverse-CDF
/// quantiles of N(0, sigma), clamped to +-4 sigma. One 64-bit draw yields
/// four offsets. The 4-sigma clamp bounds the worst-case excursion, which
/// downstream code uses to prove threshold classes cannot flip.
class GaussianTable {
public:
    explicit GaussianTable(double sigma);

    double sigma() const { return sigma_; }
    int max_abs() const { return max_abs_; }

    int sample(std::uint16_t draw) const { return table_[draw]; }

private:
    double sigma_;
    int max_abs_ = 0;
    std::vector<std::int16_t> table_;
};

} // namespace shadowtouch
