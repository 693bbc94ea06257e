#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace starima {

// Standard-normal draws via the Box-Muller transform over mt19937_64
// uniforms. The algorithm is spelled out (rather than delegating to
// std::normal_distribution) so the draw sequence is identical on every
// platform for a given seed.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * kPi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double next(double mean, double sd) { return mean + sd * next(); }

private:
    static constexpr double kPi = 3.14159265358979323846;

    double uniform01() {
        // 53-bit mantissa in [0,1)
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace starima
