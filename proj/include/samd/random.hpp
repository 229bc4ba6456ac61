#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace samd {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based generator: draw k is a pure function of (key, k), so any
/// position of the stream can be replayed without generating its prefix.
class CounterRng {
public:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    constexpr std::uint64_t key() const noexcept { return key_; }

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        return mix64(key_ + counter * kGamma);
    }

    /// Uniform in (0, 1].
    double uniform_open(std::uint64_t counter) const noexcept {
        return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform in [0, 1).
    double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Standard normal number k (Box-Muller on the uniform pair k / 2).
    double normal(std::uint64_t k) const noexcept {
        const std::uint64_t pair = k / 2;
        const double radius = std::sqrt(-2.0 * std::log(uniform_open(2 * pair)));
        const double angle = 2.0 * std::numbers::pi * uniform(2 * pair + 1);
        return (k % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
    }

private:
    std::uint64_t key_;
};

/// Key for stream `index` under `base_seed`; distinct indices give unrelated keys.
constexpr std::uint64_t stream_key(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return mix64(base_seed ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace samd
