#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace masi {

/// Seeded 64-bit generator used for all randomized routines.
///
/// The engine is std::mt19937_64 (bit-exact across platforms). Uniform
/// doubles take the top 53 bits of one draw; normals come from Box-Muller.
/// This keeps every sampling decision a pure function of the seed, so a
/// report produced with a given seed is reproducible. One instance per
/// logical task; instances are not synchronized.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Log-uniform in [lo, hi), lo > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    /// Standard normal (Box-Muller, one value per call).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace masi
