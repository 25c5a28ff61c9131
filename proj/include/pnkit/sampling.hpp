#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace pnkit {

/// Seeded sample source. Maps raw engine output by hand so that draws are
/// identical across standard library implementations.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double log_uniform(double a, double b) {
        return std::exp(uniform(std::log(a), std::log(b)));
    }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

    double normal() {
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Random direction, Euclidean unit length; callers renormalize for other norms.
    std::vector<double> direction(std::size_t dim) {
        std::vector<double> v(dim);
        double s = 0;
        do {
            s = 0;
            for (auto& c : v) {
                c = normal();
                s += c * c;
            }
        } while (s == 0);
        s = std::sqrt(s);
        for (auto& c : v) c /= s;
        return v;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace pnkit
