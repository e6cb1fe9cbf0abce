#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace qcircle::detail {

/// Platform-independent normal deviates: mt19937_64 bits, explicit 53-bit
/// uniforms and Box-Muller (std::normal_distribution is implementation-defined).
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace qcircle::detail
