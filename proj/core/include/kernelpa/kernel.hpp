#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kernelpa/signal.hpp"

namespace kernelpa {

/// 1 - |x| on [-1, 1], 0 elsewhere.
[[nodiscard]] double triangular_kernel(double x) noexcept;

/// Complex-valued static function sampled on a real amplitude grid.
struct KernelFunctionEstimate {
    RealVector grid;                  // T ascending points over [support_min, support_max]
    ComplexVector values;             // g(x_i); 0 where undefined
    std::vector<std::uint8_t> defined;
    RealVector sample_mass;           // kernel weight mass per grid point
    double aperture = 0.0;            // absolute, amplitude units
    double aperture_fraction = 0.0;
    double support_min = 0.0;
    double support_max = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return grid.size(); }
    [[nodiscard]] std::size_t defined_count() const noexcept;

    friend bool operator==(const KernelFunctionEstimate&, const KernelFunctionEstimate&) = default;
};

/// Triangular-kernel weighted averages of z on a linspace grid of
/// `grid_points` points over [min x, max x]:
///
///   g(x_i) = sum_n phi((x(n) - x_i) / delta) z(n) / sum_n phi(...)
///
/// with delta = aperture_fraction * (max x - min x). Samples with
/// mask[n] == 0 are ignored (an empty mask uses every sample).
[[nodiscard]] KernelFunctionEstimate estimate_function(std::span<const double> x,
                                                       std::span<const Complex> z,
                                                       std::size_t grid_points,
                                                       double aperture_fraction,
                                                       std::span<const std::uint8_t> mask = {});

enum class Extrapolation {
    Clamp,     // hold the nearest defined value
    GainHold,  // hold the edge gain g(x_edge) / x_edge
};

/// Linear interpolation between the nearest defined grid points.
[[nodiscard]] Complex evaluate(const KernelFunctionEstimate& f, double x,
                               Extrapolation policy = Extrapolation::Clamp);

/// Batch evaluation, same rules as evaluate().
[[nodiscard]] ComplexVector evaluate(const KernelFunctionEstimate& f, std::span<const double> x,
                                     Extrapolation policy = Extrapolation::Clamp);

/// Adds `delta` to the defined values of `f` (grids must match).
void accumulate(KernelFunctionEstimate& f, const KernelFunctionEstimate& delta);

}  // namespace kernelpa
