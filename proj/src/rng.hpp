#pragma once

#include <cstdint>

namespace calkit {

// 64-bit linear congruential generator (Knuth MMIX multiplier).  Used for
// every seeded corpus in the project so that runs are reproducible bit for
// bit across platforms and languages:
//
//   state <- state * 6364136223846793005 + 1442695040888963407  (mod 2^64)
//   uniform double in [0,1) = (state >> 11) * 2^-53
class Lcg64 {
public:
    explicit Lcg64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }

    /// Uniform double in [0,1), 53 significant bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo,hi).
    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

private:
    std::uint64_t state_;
};

} // namespace calkit
