#pragma once

#include <cstdint>

namespace fop {

/// xoshiro256** generator seeded through splitmix64.
///
/// The normal variates use a fixed Box-Muller transform rather than
/// std::normal_distribution so that a given seed produces the same stream
/// under every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal variate.
    double normal();

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fop
