#pragma once

// Shared helpers for the test suites: seeded generators and comparison
// utilities. The generator is a tiny splitmix64 so test data is reproducible
// across platforms without depending on <random> distribution internals.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "lfrac/series.hpp"

namespace testsup {

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double u01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    std::complex<double> cplx(double scale = 1.0) {
        return {scale * (2.0 * u01() - 1.0), scale * (2.0 * u01() - 1.0)};
    }
};

inline lfrac::PowerSeries random_poly(Rng& rng, int degree, double scale = 1.0) {
    std::vector<std::complex<double>> c(static_cast<size_t>(degree) + 1);
    for (auto& v : c) v = rng.cplx(scale);
    return lfrac::PowerSeries(std::move(c));
}

inline double coeff_distance(const lfrac::PowerSeries& a, const lfrac::PowerSeries& b,
                             int n_max) {
    double d = 0.0;
    for (int n = 0; n <= n_max; ++n) d = std::max(d, std::abs(a[n] - b[n]));
    return d;
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace testsup
