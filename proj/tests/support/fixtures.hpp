#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kernelpa/dpd.hpp"
#include "kernelpa/npmodel.hpp"
#include "kernelpa/refpa.hpp"
#include "kernelpa/signal.hpp"

namespace testgen {

// The reference scenario: 24 MHz excitation at 400 MHz, N = 1e5, default PA.
struct Scenario {
    kernelpa::ComplexSignal u;
    kernelpa::ComplexSignal y;
};

inline const Scenario& reference_scenario() {
    static const Scenario s = [] {
        auto u = kernelpa::generate_signal(100000, 400e6, 24e6, 1);
        auto y = kernelpa::reference_pa(u, kernelpa::default_config());
        return Scenario{std::move(u), std::move(y)};
    }();
    return s;
}

inline const Scenario& restricted_scenario() {
    static const Scenario s = [] {
        auto u = kernelpa::generate_signal(100000, 400e6, 24e6, 1);
        auto y = kernelpa::reference_pa(u, kernelpa::restricted_config());
        return Scenario{std::move(u), std::move(y)};
    }();
    return s;
}

// Leading 10% for estimation, the rest for validation.
inline kernelpa::ComplexSignal head(const kernelpa::ComplexSignal& s, double frac = 0.1) {
    return s.slice(0, static_cast<std::size_t>(frac * static_cast<double>(s.size())));
}

inline kernelpa::ComplexSignal tail(const kernelpa::ComplexSignal& s, double frac = 0.1) {
    const auto n = static_cast<std::size_t>(frac * static_cast<double>(s.size()));
    return s.slice(n, s.size() - n);
}

// Compares the feed-forward and pre-distorter kernel estimates.
struct InverseStructure {
    double max_identity_error = 0.0;  // relative, amplitude composition
    double max_phase_deviation_deg = 0.0;  // |angle(dpd / ff) - 180|, memory bases
    std::size_t phase_points = 0;
};

inline InverseStructure inverse_structure(const kernelpa::NonParametricModel& ff, const kernelpa::DpdModel& dpd) {
    using namespace kernelpa;
    const auto& inv = std::get<NonParametricModel>(dpd.inner);
    InverseStructure out;

    const auto& g0 = *ff.entries[0].estimate;
    const auto& h0 = *inv.entries[0].estimate;
    const double n0_ff = ff.projections.norms[0];
    const double n0_dpd = inv.projections.norms[0];
    const double span = g0.support_max - g0.support_min;
    const double lo = g0.support_min + 0.1 * span, hi = g0.support_max - 0.1 * span;
    for (int i = 0; i < 50; ++i) {
        const double x = lo + (hi - lo) * i / 49.0;
        const double drive = x * n0_ff;
        const double s = std::abs(dpd.gain) * std::abs(evaluate(g0, x));
        const double back = std::abs(evaluate(h0, s / n0_dpd, Extrapolation::GainHold));
        out.max_identity_error = std::max(out.max_identity_error, std::abs(back - drive) / drive);
    }

    for (std::size_t k = 1; k <= 2 && k < ff.entries.size(); ++k) {
        const auto& a = *ff.entries[k].estimate;
        const auto& b = *inv.entries[k].estimate;
        const double nk_ff = ff.projections.norms[k], nk_dpd = inv.projections.norms[k];
        // Common support in unnormalized amplitude.
        const double c_lo = std::max(a.support_min * nk_ff, b.support_min * nk_dpd);
        const double c_hi = std::min(a.support_max * nk_ff, b.support_max * nk_dpd);
        const double w = c_hi - c_lo;
        double amax = 0.0, bmax = 0.0, mass_max = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a.defined[i]) {
                amax = std::max(amax, std::abs(a.values[i]));
                mass_max = std::max(mass_max, a.sample_mass[i]);
            }
        for (std::size_t i = 0; i < b.size(); ++i)
            if (b.defined[i]) bmax = std::max(bmax, std::abs(b.values[i]));
        for (std::size_t i = 0; i < a.size(); ++i) {
            // Values resting on a few samples carry no phase information.
            if (!a.defined[i] || a.sample_mass[i] < 0.01 * mass_max) continue;
            const double r = a.grid[i] * nk_ff;
            if (r < c_lo + 0.1 * w || r > c_hi - 0.1 * w) continue;
            const Complex va = a.values[i];
            const Complex vb = evaluate(b, r / nk_dpd);
            if (std::abs(va) <= 0.1 * amax || std::abs(vb) <= 0.1 * bmax) continue;
            const double deg = std::abs(std::arg(vb / va)) * 180.0 / std::numbers::pi;
            out.max_phase_deviation_deg = std::max(out.max_phase_deviation_deg, 180.0 - deg);
            ++out.phase_points;
        }
    }
    return out;
}

}  // namespace testgen
