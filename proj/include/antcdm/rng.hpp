#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace antcdm {

// splitmix64 finalizer
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based random source. Every draw is a pure function of
/// (seed, stream, channel, step), so trials can be evaluated in any order or on
/// any thread with identical results.
class CounterRng {
  public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix64(mix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t bits(std::uint64_t channel, std::uint64_t step) const noexcept {
        return mix64(mix64(key_ ^ (channel * 0xa0761d6478bd642fULL)) ^ (step * 0xe7037ed1a0b428dbULL));
    }

    /// Uniform on the open interval (0,1).
    double uniform(std::uint64_t channel, std::uint64_t step) const noexcept { return to_open01(bits(channel, step)); }

    /// Standard normal via Box-Muller.
    double normal(std::uint64_t channel, std::uint64_t step) const noexcept {
        const std::uint64_t h = bits(channel, step);
        const double u1 = to_open01(h);
        const double u2 = to_open01(mix64(h ^ 0x8bb84b93962eacc9ULL));
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    static double to_open01(std::uint64_t h) noexcept {
        return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t key_;
};

/// Stream id for trial `trial` of sweep cell `cell` (a threshold index).
inline constexpr std::uint64_t trial_stream(std::uint64_t cell, std::uint64_t trial) noexcept {
    return (cell << 32) ^ trial;
}

} // namespace antcdm
