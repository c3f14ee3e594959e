#pragma once

#include <cstdint>
#include <string_view>

#include "error.hpp"

namespace sensortext {

/// SplitMix64: a counter-based 64-bit generator. Output depends only on the
/// seed and the number of draws, so sequences are identical on every
/// platform and compiler (unlike std:: distributions).
class SplitMix64 {
public:
    static constexpr std::string_view kAlgorithm = "splitmix64";

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        return mix(state_ += 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform integer in [lo, hi] by rejection sampling (no modulo bias).
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        if (lo > hi) throw RangeError("uniform: lo > hi");
        const std::uint64_t span = hi - lo;
        if (span == UINT64_MAX) return next();
        const std::uint64_t n = span + 1;
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        std::uint64_t draw;
        do {
            draw = next();
        } while (draw >= limit);
        return lo + draw % n;
    }

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        if (n == 0) throw RangeError("index: empty range");
        return static_cast<std::size_t>(uniform(0, n - 1));
    }

    /// Uniform real in [0, 1) with 53 bits of precision.
    double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Independent child stream keyed by `salt`.
    SplitMix64 split(std::uint64_t salt) const noexcept {
        return SplitMix64(mix(state_ ^ mix(salt + 0x632be59bd9b4e019ULL)));
    }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// 64-bit FNV-1a over bytes.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t h = 0xcbf29ce484222325ULL) noexcept {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Derives a worker seed from a master seed and a source key, so per-key
/// output does not depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view subject,
                                 std::string_view channel) noexcept {
    std::uint64_t h = fnv1a64(subject);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(channel, h);
    return SplitMix64::mix(master ^ SplitMix64::mix(h));
}

}  // namespace sensortext
