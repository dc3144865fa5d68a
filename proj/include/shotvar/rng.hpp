#pragma once

#include <cmath>
#include <cstdint>

namespace shotvar {

/// Counter-based generator: every draw is a pure hash of (seed, stream,
/// counter), so series replay bit-identically on any platform and are
/// independent of evaluation order or thread count.
///
/// Algorithm: the SplitMix64 finalizer (Steele, Lea, Flood 2014),
///   z += 0x9e3779b97f4a7c15
///   z = (z ^ z>>30) * 0xbf58476d1ce4e5b9
///   z = (z ^ z>>27) * 0x94d049bb133111eb
///   return z ^ z>>31
/// applied twice: once to fold (seed, stream) into a key, once to fold the
/// key with the counter. Uniform doubles take the top 53 bits.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix(mix(seed) ^ (0x6a09e667f3bcc909ULL + kGolden * stream))) {}

    /// 64 random bits for counter i.
    std::uint64_t word(std::uint64_t i) const noexcept { return mix(key_ ^ mix(i + kGolden)); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform(std::uint64_t i) const noexcept {
        return static_cast<double>(word(i) >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p, std::uint64_t i) const noexcept { return uniform(i) < p; }

    /// Standard normal via Box-Muller; consumes counters 2i and 2i+1.
    double normal(std::uint64_t i) const noexcept {
        double u1 = uniform(2 * i);
        double u2 = uniform(2 * i + 1);
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    static std::uint64_t mix(std::uint64_t z) noexcept {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    static constexpr double kPi = 3.14159265358979323846;
    std::uint64_t key_;
};

} // namespace shotvar
