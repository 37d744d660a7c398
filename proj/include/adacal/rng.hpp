#pragma once

#include <cstdint>

namespace adacal {

/// Counter-based generator: the i-th draw of stream (seed, stream) is
/// mix(seed, stream, i) with the SplitMix64 finalizer, so any draw can be
/// replayed without running the ones before it.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
        : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t at(std::uint64_t counter) const noexcept {
        return mix(key_ ^ mix(counter));
    }

    constexpr std::uint64_t next() noexcept { return at(counter_++); }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    constexpr double uniform_at(std::uint64_t counter) const noexcept {
        return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
    }

    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Named streams so forecasters and environments never share draws.
enum class Stream : std::uint64_t {
    outcomes = 1,
    forecaster = 2,
    generator = 3,
};

inline CounterRng make_rng(std::uint64_t seed, Stream stream, std::uint64_t trial = 0) {
    return CounterRng(seed, (static_cast<std::uint64_t>(stream) << 48) ^ trial);
}

}  // namespace adacal
