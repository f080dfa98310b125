#pragma once

// Internal splittable RNG for the Monte-Carlo oracle. splitmix64 streams are
// counter-derived from the user seed, so chunked sampling is reproducible
// regardless of scheduling.

#include <cmath>
#include <cstdint>

namespace lfrac::detail {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1); never returns exactly 0.
    double u01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Marsaglia polar rejection.
    double normal() {
        for (;;) {
            const double u = 2.0 * u01() - 1.0;
            const double v = 2.0 * u01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang; shapes < 1 are boosted.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(u01(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = u01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Beta(p, q) as a ratio of two gamma variates.
    double beta(double p, double q) {
        const double x = gamma(p);
        const double y = gamma(q);
        return x / (x + y);
    }
};

/// Derive the stream seed for a chunk index.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t chunk) {
    SplitMix64 mixer(seed ^ (0xA0761D6478BD642Full + chunk * 0xE7037ED1A0B428DBull));
    return mixer.next();
}

}  // namespace lfrac::detail
