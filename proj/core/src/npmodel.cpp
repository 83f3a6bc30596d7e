#include "kernelpa/npmodel.hpp"

#include <algorithm>
#include <cmath>

#include "kernelpa/error.hpp"
#include "kernelpa/parallel.hpp"

namespace kernelpa {
namespace {

struct Polar {
    RealVector magnitude;
    ComplexVector phase;  // unit modulus, 0 where magnitude is 0
    std::vector<std::uint8_t> valid;
};

Polar polar_of(std::span<const Complex> q) {
    Polar p;
    p.magnitude.resize(q.size());
    p.phase.resize(q.size());
    p.valid.resize(q.size());
    for (std::size_t n = 0; n < q.size(); ++n) {
        const double a = std::abs(q[n]);
        p.magnitude[n] = a;
        p.valid[n] = a > 0.0 ? 1 : 0;
        p.phase[n] = a > 0.0 ? q[n] / a : Complex{};
    }
    return p;
}

// g(|q|) e^{j arg q}, zero where q is zero.
ComplexVector basis_term(const KernelFunctionEstimate& f, const Polar& p, Extrapolation policy) {
    ComplexVector out = evaluate(f, p.magnitude, policy);
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = p.valid[n] ? out[n] * p.phase[n] : Complex{};
    return out;
}

void stage(KernelFunctionEstimate& target, bool accumulate_into, const Polar& p, ComplexVector& residual,
           const FitOptions& options) {
    ComplexVector z(residual.size());
    for (std::size_t n = 0; n < z.size(); ++n) z[n] = residual[n] * std::conj(p.phase[n]);
    auto est = estimate_function(p.magnitude, z, options.grid_points, options.aperture_fraction, p.valid);
    const auto term = basis_term(est, p, Extrapolation::Clamp);
    for (std::size_t n = 0; n < residual.size(); ++n) residual[n] -= term[n];
    if (accumulate_into)
        accumulate(target, est);
    else
        target = std::move(est);
}

}  // namespace

void FitOptions::validate() const {
    if (memory_depth < 0) throw ParameterError("memory depth must be >= 0");
    if (max_dimension < 1 || max_dimension > memory_depth + 1)
        throw ParameterError("max dimension must lie in [1, M+1]");
    if (grid_points < 2) throw ParameterError("grid points must be >= 2");
    if (!(aperture_fraction > 0.0 && aperture_fraction < 1.0))
        throw ParameterError("aperture fraction must lie in (0, 1)");
}

std::string SubsetBlock::basis_label() const {
    std::string out = "g";
    for (auto it = subset.rbegin(); it != subset.rend(); ++it) {
        if (it != subset.rbegin()) out += '_';
        out += std::to_string(*it);
    }
    return out;
}

std::string SubsetBlock::subset_label() const {
    std::string out;
    for (auto it = subset.rbegin(); it != subset.rend(); ++it) {
        if (it != subset.rbegin()) out += ';';
        out += std::to_string(*it);
    }
    return out;
}

std::vector<SubsetBlock> NonParametricModel::blocks() const {
    std::vector<SubsetBlock> out;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& s = entries[k].descriptor.subset;
        if (out.empty() || out.back().subset != s)
            out.push_back(SubsetBlock{s, k, 1});
        else
            ++out.back().count;
    }
    return out;
}

std::size_t NonParametricModel::active_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const BasisEntry& e) { return e.active; }));
}

void NonParametricModel::validate() const {
    options.validate();
    const auto layout = basis_layout(options.memory_depth, options.max_dimension);
    if (entries.size() != layout.size()) throw ParameterError("model entry count does not match the basis layout");
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& e = entries[k];
        if (e.descriptor != layout[k]) throw ParameterError("model entry " + std::to_string(k) + " is out of order");
        if (e.active && (!e.estimate || e.degenerate))
            throw ParameterError("active model entry " + std::to_string(k) + " has no estimate");
    }
    if (projections.size() != entries.size()) throw ParameterError("projection table size mismatch");
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (projections.projections[k].size() != k) throw ParameterError("projection table is not triangular");
        if (projections.degenerate[k] != entries[k].degenerate)
            throw ParameterError("degeneracy flags disagree with the projection table");
        if (!projections.degenerate[k] && !(projections.norms[k] > 0.0))
            throw ParameterError("non-degenerate column with non-positive norm");
    }
    if (active_count() == 0) throw ParameterError("model has no active basis");
}

MagnitudePhase magnitude_phase_transform(const OrthogonalBasis& b, std::span<const Complex> y) {
    if (y.size() != b.n_rows) throw ParameterError("magnitude_phase_transform: y length differs from the basis rows");
    if (b.columns.empty()) throw ParameterError("magnitude_phase_transform: empty basis");
    MagnitudePhase out;
    out.x.resize(b.columns.size());
    for (std::size_t k = 0; k < b.columns.size(); ++k) {
        auto& xk = out.x[k];
        xk.resize(b.n_rows);
        for (std::size_t n = 0; n < b.n_rows; ++n) xk[n] = std::abs(b.columns[k][n]);
    }
    out.z.resize(b.n_rows);
    out.valid.resize(b.n_rows);
    const auto& q0 = b.columns[0];
    for (std::size_t n = 0; n < b.n_rows; ++n) {
        const double a = out.x[0][n];
        out.valid[n] = a > 0.0 ? 1 : 0;
        out.z[n] = a > 0.0 ? y[n] * std::conj(q0[n] / a) : Complex{};
    }
    return out;
}

MagnitudePhase magnitude_phase_transform(const OrthogonalBasis& b, const ComplexSignal& y) {
    return magnitude_phase_transform(b, y.samples());
}

NonParametricModel fit(const ComplexSignal& u, const ComplexSignal& y, const FitOptions& options) {
    options.validate();
    if (u.size() != y.size()) throw ParameterError("fit: input and output records differ in length");
    if (u.sample_rate() != y.sample_rate()) throw ParameterError("fit: sample rates differ");
    const std::size_t skip = std::max(u.warmup(), y.warmup());
    if (skip >= u.size()) throw ParameterError("fit: records consist of warmup only");
    const auto ut = u.slice(skip, u.size() - skip);
    const auto yt = y.slice(skip, y.size() - skip);

    const auto basis = gram_schmidt(build_regressor_set(ut, options.memory_depth, options.max_dimension));
    const auto m = static_cast<std::size_t>(options.memory_depth);
    const auto target = yt.samples().subspan(m);

    std::vector<Polar> polar(basis.columns.size());
    parallel_for(polar.size(), [&](std::size_t k) { polar[k] = polar_of(basis.columns[k]); });

    NonParametricModel model;
    model.options = options;
    model.projections = basis.table;
    model.training_samples = basis.n_rows;
    model.input_label = u.label();
    model.entries.resize(basis.columns.size());

    ComplexVector residual(target.begin(), target.end());
    for (std::size_t k = 0; k < basis.columns.size(); ++k) {
        auto& e = model.entries[k];
        e.descriptor = basis.descriptors[k];
        e.degenerate = basis.table.degenerate[k];
        e.active = !e.degenerate;
        if (e.degenerate) continue;
        KernelFunctionEstimate est;
        stage(est, false, polar[k], residual, options);
        e.estimate = std::move(est);
    }
    if (options.refine) {
        for (std::size_t k = 0; k < basis.columns.size(); ++k) {
            auto& e = model.entries[k];
            if (e.degenerate) continue;
            stage(*e.estimate, true, polar[k], residual, options);
        }
    }
    return model;
}

std::vector<ComplexVector> basis_outputs(const NonParametricModel& m, const ComplexSignal& u) {
    m.validate();
    const int depth = m.options.memory_depth;
    if (u.size() <= static_cast<std::size_t>(depth)) throw ParameterError("predict: input shorter than the memory depth");
    const auto r = build_regressor_set(u.samples(), depth, m.options.max_dimension);
    const auto q = apply_projections(r, m.projections);
    const auto offset = static_cast<std::size_t>(depth);

    std::vector<ComplexVector> out(m.entries.size());
    parallel_for(m.entries.size(), [&](std::size_t k) {
        const auto& e = m.entries[k];
        if (!e.active) return;
        const auto term = basis_term(*e.estimate, polar_of(q[k]), m.options.extrapolation);
        ComplexVector full(u.size(), 0.0);
        std::copy(term.begin(), term.end(), full.begin() + static_cast<std::ptrdiff_t>(offset));
        out[k] = std::move(full);
    });
    return out;
}

ComplexSignal predict(const NonParametricModel& m, const ComplexSignal& u) {
    const auto parts = basis_outputs(m, u);
    ComplexVector y(u.size(), 0.0);
    for (const auto& p : parts) {
        if (p.empty()) continue;
        for (std::size_t n = 0; n < y.size(); ++n) y[n] += p[n];
    }
    const std::size_t warm = u.warmup() + static_cast<std::size_t>(m.options.memory_depth);
    for (std::size_t n = 0; n < std::min(warm, y.size()); ++n) y[n] = 0.0;
    return u.with_samples(std::move(y), "npmodel(" + u.label() + ")", warm);
}

ContributionReport contribution_table(const NonParametricModel& m, const ComplexSignal& u, const ComplexSignal& y,
                                      double channel_bw) {
    if (u.size() != y.size()) throw ParameterError("contribution_table: records differ in length");
    const double bw = channel_bw > 0.0 ? channel_bw : y.bandwidth();
    const auto parts = basis_outputs(m, u);
    const std::size_t warm = u.warmup() + static_cast<std::size_t>(m.options.memory_depth);

    ContributionReport report;
    ComplexVector partial(u.size(), 0.0);
    double prev_nmse = 0.0, prev_acepr = 0.0;
    bool first = true;
    for (const auto& block : m.blocks()) {
        bool block_active = false;
        for (std::size_t k = block.first; k < block.first + block.count; ++k) {
            if (parts[k].empty()) continue;
            block_active = true;
            for (std::size_t n = 0; n < partial.size(); ++n) partial[n] += parts[k][n];
        }
        const auto yhat = u.with_samples(partial, "partial", std::min(warm, u.size()));
        double cur_nmse = prev_nmse;
        double cur_acepr = prev_acepr;
        if (block_active || first) {
            cur_nmse = nmse(y, yhat);
            cur_acepr = acepr(y, yhat, bw);
        }
        ContributionRow row;
        row.basis = block.basis_label();
        row.subset = block.subset_label();
        row.active = block_active;
        row.dnmse_db = first ? cur_nmse : cur_nmse - prev_nmse;
        row.dacepr_db = first ? cur_acepr : cur_acepr - prev_acepr;
        report.rows.push_back(row);
        report.order.push_back(row.basis);
        prev_nmse = cur_nmse;
        prev_acepr = cur_acepr;
        first = false;
    }
    report.total_nmse_db = prev_nmse;
    report.total_acepr_db = prev_acepr;
    return report;
}

NonParametricModel prune(const NonParametricModel& m, const ContributionReport& report, double threshold_db) {
    if (!(threshold_db < 0.0)) throw ParameterError("prune: threshold must be negative (dB)");
    const auto blocks = m.blocks();
    if (report.rows.size() != blocks.size()) throw ParameterError("prune: report does not match the model blocks");
    NonParametricModel out = m;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& block = blocks[b];
        if (report.rows[b].basis != block.basis_label()) throw ParameterError("prune: report rows are out of order");
        if (block.subset == std::vector<int>{0}) continue;
        if (std::abs(report.rows[b].dnmse_db) < std::abs(threshold_db))
            for (std::size_t k = block.first; k < block.first + block.count; ++k) out.entries[k].active = false;
    }
    if (out.active_count() == 0) throw ParameterError("prune: no basis left active");
    return out;
}

NonParametricModel prune(const NonParametricModel& m, const ComplexSignal& u, const ComplexSignal& y,
                         double threshold_db) {
    return prune(m, contribution_table(m, u, y), threshold_db);
}

}  // namespace kernelpa
