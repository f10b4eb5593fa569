#pragma once

#include <cstdint>
#include <random>

namespace slap {

/// SplitMix64 finalizer; used to derive independent seeds.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seeded random stream. Every consumer of randomness takes one of these
/// explicitly; nothing in the library touches ambient entropy.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Bounded draws use our own rejection sampler rather than
/// std::uniform_int_distribution so results do not depend on the standard
/// library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Stream number `index` derived from `master`. Substreams for distinct
    /// indices are statistically independent, so trial i of an experiment
    /// draws the same values no matter which worker runs it.
    [[nodiscard]] static Rng substream(std::uint64_t master, std::uint64_t index) {
        return Rng(mix64(mix64(master) ^ mix64(index + 0x5851F42D4C957F2DULL)));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace slap
