#pragma once

#include "betamix/mixture.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace betamix {

/// Seeded 64-bit Mersenne twister with a portable uniform mapping, so draws
/// are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer on [lo, hi].
    long long integer(long long lo, long long hi)
    {
        return lo + static_cast<long long>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
};

/// exp of a random concave sequence of length M+1: slopes start anywhere in
/// [-3, 3] and decrease by random steps. With allow_zero_ends a random
/// prefix and/or suffix is zeroed (at least one weight stays positive).
std::vector<double> random_log_concave_weights(int order, Rng& rng, bool allow_zero_ends = true);

/// Random exp(piecewise-linear concave) mixing function on `segments` knot
/// intervals of [0, M]. With allow_zero_ends an end knot may be -inf.
ContinuousMixture random_log_concave_continuous(double order, int segments, Rng& rng, bool allow_zero_ends = true);

} // namespace betamix
