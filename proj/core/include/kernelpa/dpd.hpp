#pragma once

#include <variant>

#include "kernelpa/npmodel.hpp"
#include "kernelpa/parametric.hpp"
#include "kernelpa/signal.hpp"

namespace kernelpa {

/// Inverse-learning pre-distorter: `inner` maps the gain-normalized PA
/// output G0 * y back to the PA input u.
struct DpdModel {
    std::variant<NonParametricModel, ParametricModel> inner;
    Complex gain{1.0, 0.0};  // G0

    void validate() const;
    friend bool operator==(const DpdModel&, const DpdModel&) = default;
};

/// G0 = sum u y* / sum |y|^2 (least-squares gain from y to u), then fits
/// inner = fit(G0 y, u). The inner model extrapolates with GainHold;
/// keep_extrapolation = true keeps options.extrapolation instead.
[[nodiscard]] DpdModel dpd_train(const ComplexSignal& u, const ComplexSignal& y, const FitOptions& options = {},
                                 bool keep_extrapolation = false);

/// Parametric pre-distorter: inner = identify_least_squares(terms, G0 y, u).
[[nodiscard]] DpdModel dpd_train_parametric(const ComplexSignal& u, const ComplexSignal& y,
                                            const std::vector<ParametricTerm>& terms);

/// G0 as used by dpd_train.
[[nodiscard]] Complex dpd_gain(const ComplexSignal& u, const ComplexSignal& y);

/// Pre-distorted drive: the inner model evaluated on u.
[[nodiscard]] ComplexSignal dpd_apply(const DpdModel& d, const ComplexSignal& u);

}  // namespace kernelpa
