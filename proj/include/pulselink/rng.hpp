#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pulselink::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer applied to (seed, index). Every variate below is a
// pure function of its inputs, so streams can be evaluated out of order and
// in parallel without changing a single bit of the output.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t x = seed + (index + 1) * kGamma;
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

// Uniform in [0,1) with 53-bit resolution.
inline double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Standard normal variate, Box-Muller over two hashed uniforms.
inline double gaussian(std::uint64_t seed, std::uint64_t index) {
    const double u1 = 1.0 - to_unit(mix(seed, 2 * index));  // (0,1]
    const double u2 = to_unit(mix(seed, 2 * index + 1));
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

inline int bit(std::uint64_t seed, std::uint64_t index) {
    return static_cast<int>(mix(seed, index) & 1u);
}

// Derive an independent child seed for a named stream.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return mix(seed, stream);
}

// Recorded in run metadata so results are reproducible per implementation.
inline const char* generator_id() { return "splitmix64-boxmuller-v1"; }

}  // namespace pulselink::rng
