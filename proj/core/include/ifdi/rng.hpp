/**
 * @file rng.hpp
 * @brief Seeded deterministic random streams.
 *
 * The generator and the Gaussian transform are implemented here rather than
 * taken from <random> so that identical seeds give identical samples on any
 * standard library.
 */

#ifndef IFDI_RNG_HPP
#define IFDI_RNG_HPP

#include <cstdint>

namespace ifdi::fault {

/// splitmix64 finalizer; used both as the stream engine and for stable
/// seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic pseudo-random stream. Identical seed + call sequence gives
/// identical samples.
class FaultRng {
public:
    explicit FaultRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; always consumes two uniforms.
    double gaussian();

private:
    std::uint64_t state_;
};

}  // namespace ifdi::fault

#endif
