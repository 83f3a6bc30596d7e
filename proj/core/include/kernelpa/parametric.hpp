#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kernelpa/kernel.hpp"
#include "kernelpa/npmodel.hpp"
#include "kernelpa/regressor.hpp"
#include "kernelpa/signal.hpp"

namespace kernelpa {

/// phi(n) = v(n - lag) |v(n - lag)|^(2(p - 1)), with v = u in the original
/// domain and v = q (the orthogonalized delayed samples) in the orthogonal
/// domain.
struct ParametricTerm {
    int lag = 0;
    int p = 1;

    friend bool operator==(const ParametricTerm&, const ParametricTerm&) = default;
    friend auto operator<=>(const ParametricTerm&, const ParametricTerm&) = default;
};

enum class Domain { Orthogonal, Original };

struct ParametricModel {
    Domain domain = Domain::Original;
    std::vector<ParametricTerm> terms;
    ComplexVector coefficients;
    /// Orthogonal domain only: projections of the delayed columns u(n) ..
    /// u(n - L), L the largest lag of the terms.
    ProjectionTable projections;
    std::optional<double> training_nmse_db;

    [[nodiscard]] int max_lag() const;
    void validate() const;

    friend bool operator==(const ParametricModel&, const ParametricModel&) = default;
};

struct PolynomialFit {
    ComplexVector coefficients;  // c_p for x^(2p-1), p = 1 .. (order + 1) / 2
    double residual_db = 0.0;
};

/// Weighted least squares g(x_i) ~ sum_p c_p x_i^(2p-1) over the defined
/// grid points, weights = sample mass. Throws DegeneracyError when the
/// design is rank deficient.
[[nodiscard]] PolynomialFit fit_polynomial_to_kernel(const KernelFunctionEstimate& f, int order);

struct ExtractionResult {
    ParametricModel model;  // orthogonal domain
    std::vector<double> residual_db;
};

/// Fits a polynomial of the given order to the estimate of each listed
/// single-lag basis, e.g. {{0, 7}, {1, 1}, {2, 1}}.
[[nodiscard]] ExtractionResult extract_parametric(const NonParametricModel& m,
                                                  const std::vector<std::pair<int, int>>& lag_orders);

/// Replaces q(n - k) by its combination of u(n), .., u(n - k). Nonlinear
/// terms are only accepted on lag 0, where q(n) = u(n) / norm_0.
[[nodiscard]] ParametricModel to_original_domain(const ParametricModel& m);

/// Complex least squares in the original domain. The records are trimmed by
/// their warmup and the largest lag. Throws DegeneracyError listing the
/// dependent term indices on rank deficiency.
[[nodiscard]] ParametricModel identify_least_squares(const std::vector<ParametricTerm>& terms,
                                                     const ComplexSignal& u, const ComplexSignal& y);

/// First max_lag + u.warmup() samples are warmup.
[[nodiscard]] ComplexSignal predict(const ParametricModel& m, const ComplexSignal& u);

/// Real floating point operations per output sample. Complex multiply 6,
/// complex add 2, real multiply or add 1, magnitude 4, kernel lookup with
/// interpolation 4.
[[nodiscard]] std::size_t flops_per_sample(const ParametricModel& m);
[[nodiscard]] std::size_t flops_per_sample(const NonParametricModel& m);

}  // namespace kernelpa
