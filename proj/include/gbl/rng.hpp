#pragma once

#include <cmath>
#include <cstdint>

#include "gbl/types.hpp"

namespace gbl {

/// Deterministic pseudo-random generator (splitmix64 core).
///
/// The standard <random> distributions are implementation-defined, which
/// breaks byte-identical reports across toolchains; all sampling used by
/// the estimators goes through this class instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Uniform direction on the Euclidean unit sphere in R^n.
    Vec sphere(int n) {
        Vec x(n);
        double s2 = 0.0;
        do {
            for (int i = 0; i < n; ++i) x[i] = normal();
            s2 = x.squaredNorm();
        } while (s2 == 0.0);
        return x / std::sqrt(s2);
    }

    /// Derive an independent stream seed from (seed, stream index).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

}  // namespace gbl
