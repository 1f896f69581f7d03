#pragma once

#include <cstdint>

namespace rmtlab {

/// splitmix64 finalizer: a bijection on 64-bit words with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of stream `index` under `base`. Injective in `index` for a fixed base
/// (composition of bijections), and stable across platforms.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return mix64(mix64(base) + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Counter-based splitmix64 stream. Every draw is a pure function of
/// (seed, number of prior draws), so results never depend on scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_open0() noexcept { return 1.0 - uniform(); }

    /// Standard normal via the Marsaglia polar method. The spare deviate is
    /// cached, which keeps the stream deterministic.
    double normal() noexcept;

    /// Standard exponential.
    double exponential() noexcept;

    /// +1 or -1 with equal probability.
    double sign() noexcept { return (next_u64() >> 63) ? 1.0 : -1.0; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rmtlab
