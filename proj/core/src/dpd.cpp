#include "kernelpa/dpd.hpp"

#include <algorithm>

#include "kernelpa/error.hpp"

namespace kernelpa {

void DpdModel::validate() const {
    if (gain == Complex{}) throw ParameterError("DPD gain normalization must be nonzero");
    std::visit([](const auto& m) { m.validate(); }, inner);
}

Complex dpd_gain(const ComplexSignal& u, const ComplexSignal& y) {
    if (u.size() != y.size()) throw ParameterError("dpd: records differ in length");
    if (u.sample_rate() != y.sample_rate()) throw ParameterError("dpd: sample rates differ");
    const std::size_t skip = std::max(u.warmup(), y.warmup());
    Complex num = 0.0;
    double den = 0.0;
    for (std::size_t n = skip; n < u.size(); ++n) {
        num += u[n] * std::conj(y[n]);
        den += std::norm(y[n]);
    }
    if (!(den > 0.0)) throw ParameterError("dpd: PA output is all zero");
    const Complex g = num / den;
    if (g == Complex{}) throw ParameterError("dpd: input and output are uncorrelated");
    return g;
}

DpdModel dpd_train(const ComplexSignal& u, const ComplexSignal& y, const FitOptions& options,
                   bool keep_extrapolation) {
    const Complex g = dpd_gain(u, y);
    FitOptions opts = options;
    if (!keep_extrapolation) opts.extrapolation = Extrapolation::GainHold;
    return DpdModel{fit(y.scaled(g), u, opts), g};
}

DpdModel dpd_train_parametric(const ComplexSignal& u, const ComplexSignal& y,
                              const std::vector<ParametricTerm>& terms) {
    const Complex g = dpd_gain(u, y);
    return DpdModel{identify_least_squares(terms, y.scaled(g), u), g};
}

ComplexSignal dpd_apply(const DpdModel& d, const ComplexSignal& u) {
    d.validate();
    auto out = std::visit([&](const auto& m) { return predict(m, u); }, d.inner);
    return out.with_samples(ComplexVector(out.samples().begin(), out.samples().end()), "dpd(" + u.label() + ")",
                            out.warmup());
}

}  // namespace kernelpa
