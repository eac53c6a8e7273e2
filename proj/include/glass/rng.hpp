#pragma once

#include <cmath>
#include <cstdint>

namespace glass {

// SplitMix64: tiny 64-bit generator with a one-word state. Chosen over the
// std:: engines because its output sequence is fully pinned by the algorithm,
// so seeded artifacts are reproducible across standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 bits of mantissa.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double next_double(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Uniform integer in [0, n). n must be > 0. Modulo bias is irrelevant at
    // the ranges used here (grids, class counts).
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    // Standard normal via Box-Muller. Explicit formula instead of
    // std::normal_distribution, again for cross-platform stability.
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    // Derive an independent stream, e.g. one per trial index.
    SplitMix64 fork(std::uint64_t salt) {
        SplitMix64 mixer(state_ ^ (salt * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull));
        return SplitMix64(mixer.next_u64());
    }

private:
    std::uint64_t state_;
};

} // namespace glass
