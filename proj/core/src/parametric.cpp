#include "kernelpa/parametric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "kernelpa/error.hpp"
#include "kernelpa/metrics.hpp"

namespace kernelpa {
namespace {

constexpr double kRankThreshold = 1e-10;

// Column-scaled rank-revealing QR. Returns the solution or throws with the
// indices of the columns left out by the pivoting.
Eigen::VectorXcd solve_ls(Eigen::MatrixXcd a, const Eigen::VectorXcd& b, const char* what) {
    Eigen::VectorXd scale(a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const double n = a.col(j).norm();
        scale(j) = n > 0.0 ? 1.0 / n : 1.0;
        a.col(j) *= scale(j);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < a.cols()) {
        std::vector<std::size_t> dependent;
        for (Eigen::Index j = qr.rank(); j < a.cols(); ++j)
            dependent.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()(j)));
        std::sort(dependent.begin(), dependent.end());
        std::string list;
        for (auto d : dependent) list += (list.empty() ? "" : ",") + std::to_string(d);
        throw DegeneracyError(std::string(what) + ": rank-deficient design, dependent columns " + list,
                              std::move(dependent));
    }
    Eigen::VectorXcd x = qr.solve(b);
    for (Eigen::Index j = 0; j < x.size(); ++j) x(j) *= scale(j);
    return x;
}

// phi(n) = v v |v|^(2(p-1)) for a single sample.
Complex term_value(Complex v, int p) {
    if (p == 1) return v;
    const double m2 = std::norm(v);
    double w = m2;
    for (int i = 2; i < p; ++i) w *= m2;
    return v * w;
}

void check_terms(const std::vector<ParametricTerm>& terms) {
    if (terms.empty()) throw ParameterError("parametric model needs at least one term");
    for (const auto& t : terms)
        if (t.lag < 0 || t.p < 1) throw ParameterError("parametric term needs lag >= 0 and p >= 1");
}

int max_lag_of(const std::vector<ParametricTerm>& terms) {
    int l = 0;
    for (const auto& t : terms) l = std::max(l, t.lag);
    return l;
}

}  // namespace

int ParametricModel::max_lag() const { return max_lag_of(terms); }

void ParametricModel::validate() const {
    check_terms(terms);
    if (coefficients.size() != terms.size()) throw ParameterError("parametric model: coefficient count mismatch");
    if (domain == Domain::Orthogonal) {
        const auto need = static_cast<std::size_t>(max_lag()) + 1;
        if (projections.size() != need)
            throw ParameterError("orthogonal parametric model needs projections for lags 0.." + std::to_string(max_lag()));
        for (std::size_t k = 0; k < need; ++k)
            if (projections.projections[k].size() != k) throw ParameterError("projection table is not triangular");
        for (const auto& t : terms)
            if (projections.degenerate[static_cast<std::size_t>(t.lag)])
                throw ParameterError("parametric term references a degenerate column");
    }
}

PolynomialFit fit_polynomial_to_kernel(const KernelFunctionEstimate& f, int order) {
    if (order < 1) throw ParameterError("polynomial order must be >= 1");
    const auto n_coef = static_cast<std::size_t>((order + 1) / 2);
    std::vector<std::size_t> pts;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.defined[i] && f.sample_mass[i] > 0.0) pts.push_back(i);
    if (pts.size() < static_cast<std::size_t>(order) + 1)
        throw ParameterError("polynomial fit needs at least order + 1 defined grid points");

    double xmax = 0.0;
    for (auto i : pts) xmax = std::max(xmax, f.grid[i]);
    if (!(xmax > 0.0)) throw DegeneracyError("polynomial fit: grid has no positive amplitude", {});

    Eigen::MatrixXcd a(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(n_coef));
    Eigen::VectorXcd b(static_cast<Eigen::Index>(pts.size()));
    for (std::size_t r = 0; r < pts.size(); ++r) {
        const double w = std::sqrt(f.sample_mass[pts[r]]);
        const double t = f.grid[pts[r]] / xmax;
        double pw = t;
        for (std::size_t c = 0; c < n_coef; ++c) {
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = w * pw;
            pw *= t * t;
        }
        b(static_cast<Eigen::Index>(r)) = w * f.values[pts[r]];
    }
    const Eigen::VectorXcd d = solve_ls(a, b, "polynomial fit");

    PolynomialFit out;
    out.coefficients.resize(n_coef);
    double xs = xmax;
    for (std::size_t c = 0; c < n_coef; ++c) {
        out.coefficients[c] = d(static_cast<Eigen::Index>(c)) / xs;
        xs *= xmax * xmax;
    }
    const double err = (a * d - b).squaredNorm();
    const double ref = b.squaredNorm();
    out.residual_db = ref > 0.0 ? std::max(kMetricFloorDb, 10.0 * std::log10(std::max(err / ref, 1e-300)))
                                : kMetricFloorDb;
    return out;
}

ExtractionResult extract_parametric(const NonParametricModel& m, const std::vector<std::pair<int, int>>& lag_orders) {
    m.validate();
    if (lag_orders.empty()) throw ParameterError("extraction needs at least one lag");
    std::set<int> seen;
    ExtractionResult out;
    auto& pm = out.model;
    pm.domain = Domain::Orthogonal;
    for (const auto& [lag, order] : lag_orders) {
        if (lag < 0 || lag > m.options.memory_depth)
            throw ParameterError("extraction lag " + std::to_string(lag) + " outside [0, M]");
        if (!seen.insert(lag).second) throw ParameterError("extraction lag listed twice");
        const auto& e = m.entries[static_cast<std::size_t>(lag)];
        if (!e.active || !e.estimate)
            throw ParameterError("basis g" + std::to_string(lag) + " is not active");
        const auto fitted = fit_polynomial_to_kernel(*e.estimate, order);
        for (std::size_t c = 0; c < fitted.coefficients.size(); ++c) {
            pm.terms.push_back(ParametricTerm{lag, static_cast<int>(c) + 1});
            pm.coefficients.push_back(fitted.coefficients[c]);
        }
        out.residual_db.push_back(fitted.residual_db);
    }
    pm.projections = m.projections.leading(static_cast<std::size_t>(pm.max_lag()) + 1);
    pm.validate();
    return out;
}

ParametricModel to_original_domain(const ParametricModel& m) {
    m.validate();
    if (m.domain == Domain::Original) return m;
    const auto n = static_cast<std::size_t>(m.max_lag()) + 1;
    const auto& t = m.projections;

    // q_k = sum_j inv[k][j] u(n - j), from a_k = sum_l P[k][l] q_l + norm_k q_k.
    std::vector<ComplexVector> inv(n, ComplexVector(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        if (t.degenerate[k]) continue;
        ComplexVector row(n, 0.0);
        row[k] = 1.0;
        for (std::size_t l = 0; l < k; ++l) {
            if (t.degenerate[l]) continue;
            for (std::size_t j = 0; j <= l; ++j) row[j] -= t.projections[k][l] * inv[l][j];
        }
        for (auto& c : row) c /= t.norms[k];
        inv[k] = std::move(row);
    }

    std::map<ParametricTerm, Complex> merged;
    for (std::size_t i = 0; i < m.terms.size(); ++i) {
        const auto& term = m.terms[i];
        const Complex coef = m.coefficients[i];
        if (term.p == 1) {
            const auto k = static_cast<std::size_t>(term.lag);
            for (std::size_t j = 0; j <= k; ++j) merged[ParametricTerm{static_cast<int>(j), 1}] += coef * inv[k][j];
        } else {
            if (term.lag != 0)
                throw UnsupportedSubstitutionError("nonlinear term on lag " + std::to_string(term.lag) +
                                                   " has no exact original-domain form");
            // q(n) = u(n) / norm_0, so q|q|^(2(p-1)) = u|u|^(2(p-1)) / norm_0^(2p-1).
            const double s = std::pow(t.norms[0], 2 * term.p - 1);
            merged[term] += coef / s;
        }
    }

    ParametricModel out;
    out.domain = Domain::Original;
    for (const auto& [term, coef] : merged) {
        out.terms.push_back(term);
        out.coefficients.push_back(coef);
    }
    out.training_nmse_db = m.training_nmse_db;
    return out;
}

namespace {

// Rows of phi for samples [skip, n) of the source columns v_lag(n).
Eigen::MatrixXcd design(const std::vector<ParametricTerm>& terms, std::span<const Complex> u, std::size_t begin) {
    const std::size_t rows = u.size() - begin;
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(terms.size()));
    for (std::size_t c = 0; c < terms.size(); ++c) {
        const auto lag = static_cast<std::size_t>(terms[c].lag);
        for (std::size_t r = 0; r < rows; ++r)
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = term_value(u[begin + r - lag], terms[c].p);
    }
    return a;
}

}  // namespace

ParametricModel identify_least_squares(const std::vector<ParametricTerm>& terms, const ComplexSignal& u,
                                       const ComplexSignal& y) {
    check_terms(terms);
    if (u.size() != y.size()) throw ParameterError("identify: records differ in length");
    if (u.sample_rate() != y.sample_rate()) throw ParameterError("identify: sample rates differ");
    const std::size_t begin = std::max(u.warmup(), y.warmup()) + static_cast<std::size_t>(max_lag_of(terms));
    if (u.size() <= begin || u.size() - begin < 10 * terms.size())
        throw ParameterError("identify: record needs at least 10 samples per term");

    const auto a = design(terms, u.samples(), begin);
    Eigen::VectorXcd b(static_cast<Eigen::Index>(u.size() - begin));
    for (std::size_t r = 0; r < u.size() - begin; ++r) b(static_cast<Eigen::Index>(r)) = y[begin + r];
    const Eigen::VectorXcd x = solve_ls(a, b, "identify");

    ParametricModel out;
    out.domain = Domain::Original;
    out.terms = terms;
    out.coefficients.assign(x.data(), x.data() + x.size());
    const Eigen::VectorXcd fit = a * x;
    const std::span<const Complex> yv(b.data(), static_cast<std::size_t>(b.size()));
    const std::span<const Complex> fv(fit.data(), static_cast<std::size_t>(fit.size()));
    out.training_nmse_db = nmse(yv, fv);
    return out;
}

ComplexSignal predict(const ParametricModel& m, const ComplexSignal& u) {
    m.validate();
    const int lmax = m.max_lag();
    if (u.size() <= static_cast<std::size_t>(lmax)) throw ParameterError("predict: input shorter than the largest lag");
    const auto off = static_cast<std::size_t>(lmax);

    // Source columns indexed by output sample n >= off.
    std::vector<ComplexVector> src(off + 1);
    if (m.domain == Domain::Original) {
        for (std::size_t l = 0; l <= off; ++l) {
            src[l].resize(u.size() - off);
            for (std::size_t r = 0; r < src[l].size(); ++r) src[l][r] = u[r + off - l];
        }
    } else {
        src = apply_projections(build_regressor_set(u.samples(), lmax, 1), m.projections);
    }

    ComplexVector y(u.size(), 0.0);
    for (std::size_t i = 0; i < m.terms.size(); ++i) {
        const auto& col = src[static_cast<std::size_t>(m.terms[i].lag)];
        const Complex c = m.coefficients[i];
        for (std::size_t r = 0; r < col.size(); ++r) y[r + off] += c * term_value(col[r], m.terms[i].p);
    }
    const std::size_t warm = std::min(u.size(), u.warmup() + off);
    for (std::size_t n = 0; n < warm; ++n) y[n] = 0.0;
    return u.with_samples(std::move(y), "parametric(" + u.label() + ")", warm);
}

std::size_t flops_per_sample(const ParametricModel& m) {
    m.validate();
    std::map<int, int> top;  // lag -> highest p of a nonlinear term
    std::size_t total = 0;
    for (const auto& t : m.terms) {
        if (t.p > 1) top[t.lag] = std::max(top[t.lag], t.p);
        total += t.p == 1 ? 6 : 8;  // coefficient multiply, plus real-by-complex scaling
    }
    for (const auto& [lag, p] : top) {
        total += 3;                                      // |v|^2
        total += static_cast<std::size_t>(std::max(0, p - 2));  // higher even powers
    }
    total += 2 * (m.terms.size() - 1);
    if (m.domain == Domain::Orthogonal) {
        for (std::size_t k = 0; k <= static_cast<std::size_t>(m.max_lag()); ++k) total += 8 * k + 2;
    }
    return total;
}

std::size_t flops_per_sample(const NonParametricModel& m) {
    m.validate();
    std::size_t last = 0;
    std::size_t active = 0;
    for (std::size_t k = 0; k < m.entries.size(); ++k)
        if (m.entries[k].active) {
            last = k + 1;
            ++active;
        }
    std::size_t total = 0;
    std::set<int> lags;
    for (std::size_t k = 0; k < last; ++k) {
        const auto& d = m.entries[k].descriptor;
        if (d.dimension() < 2) continue;
        for (int l : d.subset)
            if (l != d.carrier_lag) lags.insert(l);
        total += d.dimension();  // (d - 2) magnitude products, then real-by-complex scaling
    }
    total += 4 * lags.size();
    for (std::size_t k = 0; k < last; ++k) total += 8 * k + 2;  // frozen Gram-Schmidt
    total += active * (4 + 4 + 8);                               // magnitude, lookup, rotation
    total += 2 * (active - 1);
    return total;
}

}  // namespace kernelpa
