#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "drgen/math.hpp"

namespace drgen {

/// SplitMix64 finalizer. Bijective on 64-bit words with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Order-dependent combination of two words: mix64(a ^ mix64(b)).
constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b)); }

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

/// Minimal-state generator for per-pixel streams (one per sample, so it must
/// be cheap to construct).
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Platform-stable draws on top of a 64-bit engine. The standard library's
/// distributions are implementation-defined, so every conversion from raw
/// engine output to a variate lives here.
template <class Engine>
class BasicRandomStream {
    __extension__ using U128 = unsigned __int128;

public:
    explicit BasicRandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi); returns lo exactly for a zero-width range.
    double uniform(double lo, double hi) {
        const double u = uniform();
        return hi > lo ? lo + (hi - lo) * u : lo;
    }

    /// Log-uniform in [lo, hi], both > 0.
    double log_uniform(double lo, double hi) {
        const double u = uniform();
        return hi > lo ? std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u) : lo;
    }

    /// Uniform integer in [0, n). Unbiased (Lemire's multiply-shift with rejection).
    std::uint64_t index(std::uint64_t n) {
        if (n <= 1) {
            engine_();
            return 0;
        }
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t x = engine_();
            const U128 m = static_cast<U128>(x) * n;
            if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
        }
    }

    /// Integer uniform in [lo, hi] inclusive.
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(index(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Standard normal via Box-Muller; consumes exactly two engine outputs.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    std::uint64_t bits() { return engine_(); }

private:
    Engine engine_;
};

/// Stream used for scenario sampling and library generation.
using RandomStream = BasicRandomStream<std::mt19937_64>;
/// Stream used inside the renderer's per-pixel sampling loop.
using PixelStream = BasicRandomStream<SplitMix64>;

}  // namespace drgen
