#pragma once

// Reproducible random sources. RngStream is a counter-based SplitMix64
// generator: the state advances by a fixed odd increment and each output is a
// bit-mix of the counter, so identical seeds give identical sequences on every
// platform, and independent streams are derived from (seed, index) pairs
// without sharing state.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "pathlab/geometry.hpp"

namespace pathlab {

class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix64(state_);
    }

    /// Uniform double strictly inside (0,1): 53 random bits offset by half an ulp.
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Stream derived from this stream's seed and an index. Derivation hashes
    /// the pair, so derived streams never overlap the parent sequence.
    RngStream derived(std::uint64_t index) const {
        return RngStream(mix64(seed_ ^ mix64(kGamma * (index + 1))));
    }

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    std::uint64_t seed_;
    std::uint64_t state_;
};

/// Point with d coordinates drawn i.i.d. uniform on (0,1).
inline Point sample_uniform(RngStream& rng, int d) {
    Point p = Point::zeros(d);
    for (int i = 0; i < d; ++i) p[i] = rng.next_double();
    return p;
}

/// Rejection-samples uniform points until one lands in free space. Throws
/// after 1e6 consecutive rejections, which signals a degenerate scenario.
inline Point sample_free(RngStream& rng, const Scenario& s) {
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        Point p = sample_uniform(rng, s.d);
        if (point_in_free(p, s)) return p;
    }
    throw std::runtime_error("sample_free: 1e6 consecutive rejections, free space appears to have measure ~0");
}

/// Poisson(lambda) by Knuth's multiplication method. Large rates are split in
/// half recursively (a sum of independent Poissons is Poisson) so exp(-lambda)
/// never underflows.
inline std::uint64_t poisson_count(RngStream& rng, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("poisson_count requires lambda > 0");
    if (lambda > 500.0)
        return poisson_count(rng, lambda / 2.0) + poisson_count(rng, lambda / 2.0);
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.next_double();
    } while (p > limit);
    return k - 1;
}

}  // namespace pathlab
