#pragma once

#include <cstdint>

#include "osculate/linalg.hpp"

namespace osc {

/// SplitMix64. Hand-rolled so that seeded reports are byte-identical across
/// standard libraries (std::uniform_real_distribution is not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform(double lo, double hi) {
        double u = double(next() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + int(next() % std::uint64_t(hi - lo + 1));
    }

    Vec uniform_vec(int n, double lo, double hi) {
        Vec v(std::size_t(n), 0.0);
        for (double& x : v) x = uniform(lo, hi);
        return v;
    }

private:
    std::uint64_t state_;
};

}  // namespace osc
