#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace kernelpa::detail {

/// Circular complex Gaussian source with unit total variance. mt19937_64 is
/// fully specified by the standard; the Box-Muller transform is done here
/// (std::normal_distribution is implementation-defined) so streams are
/// reproducible across standard libraries.
class ComplexGaussian {
public:
    explicit ComplexGaussian(std::uint64_t seed) : engine_(seed) {}

    std::complex<double> operator()() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-std::log(u1));  // E|z|^2 = 1
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace kernelpa::detail
