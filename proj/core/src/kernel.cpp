#include "kernelpa/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "kernelpa/error.hpp"

namespace kernelpa {
namespace {

struct DefinedPoints {
    RealVector x;
    ComplexVector v;
};

DefinedPoints defined_points(const KernelFunctionEstimate& f) {
    DefinedPoints d;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f.defined[i]) continue;
        d.x.push_back(f.grid[i]);
        d.v.push_back(f.values[i]);
    }
    if (d.x.empty()) throw EvaluationError("kernel estimate has no defined grid points");
    return d;
}

Complex interpolate(const DefinedPoints& d, double x, Extrapolation policy) {
    if (!std::isfinite(x) || x < 0.0) throw ParameterError("evaluation amplitude must be finite and >= 0");
    if (x <= d.x.front()) {
        if (x == d.x.front() || policy == Extrapolation::Clamp || !(d.x.front() > 0.0)) return d.v.front();
        return d.v.front() * (x / d.x.front());
    }
    if (x >= d.x.back()) {
        if (x == d.x.back() || policy == Extrapolation::Clamp) return d.v.back();
        return d.v.back() * (x / d.x.back());
    }
    const auto hi = static_cast<std::size_t>(std::upper_bound(d.x.begin(), d.x.end(), x) - d.x.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - d.x[lo]) / (d.x[hi] - d.x[lo]);
    return d.v[lo] + t * (d.v[hi] - d.v[lo]);
}

}  // namespace

double triangular_kernel(double x) noexcept {
    const double a = std::abs(x);
    return a <= 1.0 ? 1.0 - a : 0.0;
}

std::size_t KernelFunctionEstimate::defined_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(defined.begin(), defined.end(), [](std::uint8_t d) { return d != 0; }));
}

KernelFunctionEstimate estimate_function(std::span<const double> x, std::span<const Complex> z,
                                         std::size_t grid_points, double aperture_fraction,
                                         std::span<const std::uint8_t> mask) {
    if (x.size() != z.size()) throw ParameterError("estimate_function: x and z differ in length");
    if (grid_points < 2) throw ParameterError("estimate_function: need at least 2 grid points");
    if (x.size() < grid_points) throw ParameterError("estimate_function: fewer samples than grid points");
    if (!(aperture_fraction > 0.0 && aperture_fraction < 1.0))
        throw ParameterError("estimate_function: aperture fraction must lie in (0, 1)");
    if (!mask.empty() && mask.size() != x.size())
        throw ParameterError("estimate_function: mask length differs from x");

    auto used = [&](std::size_t n) { return mask.empty() || mask[n] != 0; };

    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (std::size_t n = 0; n < x.size(); ++n) {
        if (!std::isfinite(x[n]) || x[n] < 0.0)
            throw ParameterError("estimate_function: amplitudes must be finite and nonnegative");
        if (!used(n)) continue;
        if (!any) {
            lo = hi = x[n];
            any = true;
        } else {
            lo = std::min(lo, x[n]);
            hi = std::max(hi, x[n]);
        }
    }
    if (!any) throw EstimationError("estimate_function: no usable samples");
    const double span = hi - lo;
    if (!(span > 0.0)) throw EstimationError("estimate_function: amplitude support has zero width");

    KernelFunctionEstimate f;
    f.support_min = lo;
    f.support_max = hi;
    f.aperture_fraction = aperture_fraction;
    f.aperture = aperture_fraction * span;
    f.grid.resize(grid_points);
    const double step = span / static_cast<double>(grid_points - 1);
    for (std::size_t i = 0; i < grid_points; ++i) f.grid[i] = lo + static_cast<double>(i) * step;
    f.grid.back() = hi;

    ComplexVector num(grid_points, 0.0);
    f.sample_mass.assign(grid_points, 0.0);
    const double delta = f.aperture;
    const double inv = 1.0 / delta;
    const auto last = static_cast<long>(grid_points) - 1;
    // Each sample only reaches grid points within one aperture; accumulation
    // runs in sample order for every grid point.
    for (std::size_t n = 0; n < x.size(); ++n) {
        if (!used(n)) continue;
        const long first = std::max(0L, static_cast<long>(std::ceil((x[n] - delta - lo) / step)) - 1);
        const long stop = std::min(last, static_cast<long>(std::floor((x[n] + delta - lo) / step)) + 1);
        for (long i = first; i <= stop; ++i) {
            const double w = triangular_kernel((x[n] - f.grid[static_cast<std::size_t>(i)]) * inv);
            if (w <= 0.0) continue;
            f.sample_mass[static_cast<std::size_t>(i)] += w;
            num[static_cast<std::size_t>(i)] += w * z[n];
        }
    }

    f.values.assign(grid_points, 0.0);
    f.defined.assign(grid_points, 0);
    for (std::size_t i = 0; i < grid_points; ++i) {
        if (f.sample_mass[i] > 0.0) {
            f.values[i] = num[i] / f.sample_mass[i];
            f.defined[i] = 1;
        }
    }
    if (f.defined_count() == 0) throw EstimationError("estimate_function: every grid point is undefined");
    return f;
}

Complex evaluate(const KernelFunctionEstimate& f, double x, Extrapolation policy) {
    return interpolate(defined_points(f), x, policy);
}

ComplexVector evaluate(const KernelFunctionEstimate& f, std::span<const double> x, Extrapolation policy) {
    const auto d = defined_points(f);
    ComplexVector out(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) out[n] = interpolate(d, x[n], policy);
    return out;
}

void accumulate(KernelFunctionEstimate& f, const KernelFunctionEstimate& delta) {
    if (f.grid != delta.grid) throw ParameterError("accumulate: grids differ");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.defined[i] && delta.defined[i]) f.values[i] += delta.values[i];
}

}  // namespace kernelpa
