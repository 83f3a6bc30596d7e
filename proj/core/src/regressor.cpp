#include "kernelpa/regressor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kernelpa/error.hpp"
#include "kernelpa/parallel.hpp"

namespace kernelpa {
namespace {

// All size-d subsets of {0..n-1} in lexicographic order, ascending lags.
void combinations(int n, int d, std::vector<int>& current, int start,
                  std::vector<std::vector<int>>& out) {
    if (static_cast<int>(current.size()) == d) {
        out.push_back(current);
        return;
    }
    for (int i = start; i < n; ++i) {
        current.push_back(i);
        combinations(n, d, current, i + 1, out);
        current.pop_back();
    }
}

void check_layout_args(int memory_depth, int max_dimension) {
    if (memory_depth < 0) throw ParameterError("memory depth must be >= 0");
    if (max_dimension < 1 || max_dimension > memory_depth + 1)
        throw ParameterError("max dimension must lie in [1, M+1]");
}

}  // namespace

std::string BasisDescriptor::subset_label() const {
    std::vector<int> asc(subset.rbegin(), subset.rend());
    std::string out;
    for (std::size_t i = 0; i < asc.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(asc[i]);
    }
    return out;
}

void BasisDescriptor::validate(int max_lag) const {
    if (subset.empty()) throw ParameterError("basis subset is empty");
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] < 0 || subset[i] > max_lag)
            throw ParameterError("basis lag " + std::to_string(subset[i]) + " outside [0, M]");
        if (i > 0 && !(subset[i - 1] > subset[i]))
            throw ParameterError("basis lags must be distinct and descending");
    }
    if (std::find(subset.begin(), subset.end(), carrier_lag) == subset.end())
        throw ParameterError("carrier lag is not part of the subset");
}

std::vector<BasisDescriptor> basis_layout(int memory_depth, int max_dimension) {
    check_layout_args(memory_depth, max_dimension);
    std::vector<BasisDescriptor> out;
    for (int d = 1; d <= max_dimension; ++d) {
        std::vector<std::vector<int>> subsets;
        std::vector<int> scratch;
        combinations(memory_depth + 1, d, scratch, 0, subsets);
        for (const auto& asc : subsets) {
            std::vector<int> desc(asc.rbegin(), asc.rend());
            for (int carrier : asc) out.push_back(BasisDescriptor{desc, carrier});
        }
    }
    return out;
}

std::size_t column_count(int memory_depth, int max_dimension) {
    check_layout_args(memory_depth, max_dimension);
    std::size_t total = 0;
    const auto n = static_cast<std::size_t>(memory_depth + 1);
    std::size_t binom = 1;  // C(n, d), built incrementally
    for (std::size_t d = 1; d <= static_cast<std::size_t>(max_dimension); ++d) {
        binom = binom * (n - d + 1) / d;
        total += binom * d;
    }
    return total;
}

RegressorMatrix build_regressor_set(const ComplexSignal& u, int memory_depth, int max_dimension) {
    if (u.size() <= 10 * static_cast<std::size_t>(memory_depth + 1))
        throw ParameterError("record too short for memory depth " + std::to_string(memory_depth));
    return build_regressor_set(u.samples(), memory_depth, max_dimension);
}

RegressorMatrix build_regressor_set(std::span<const Complex> u, int memory_depth, int max_dimension) {
    auto layout = basis_layout(memory_depth, max_dimension);
    if (u.size() <= static_cast<std::size_t>(memory_depth))
        throw ParameterError("record shorter than the memory depth");

    const std::size_t rows = u.size() - static_cast<std::size_t>(memory_depth);
    const std::size_t m = static_cast<std::size_t>(memory_depth);

    // Magnitudes of the delayed records, shared by all augmented columns.
    std::vector<RealVector> magnitude;
    if (max_dimension > 1) {
        magnitude.resize(m + 1);
        for (std::size_t lag = 0; lag <= m; ++lag) {
            magnitude[lag].resize(rows);
            for (std::size_t r = 0; r < rows; ++r) magnitude[lag][r] = std::abs(u[r + m - lag]);
        }
    }

    RegressorMatrix out;
    out.n_rows = rows;
    out.memory_depth = memory_depth;
    out.columns.resize(layout.size());
    parallel_for(layout.size(), [&](std::size_t k) {
        const auto& desc = layout[k];
        const auto carrier = static_cast<std::size_t>(desc.carrier_lag);
        ComplexVector col(rows);
        for (std::size_t r = 0; r < rows; ++r) col[r] = u[r + m - carrier];
        for (int lag : desc.subset) {
            if (lag == desc.carrier_lag) continue;
            const auto& mag = magnitude[static_cast<std::size_t>(lag)];
            for (std::size_t r = 0; r < rows; ++r) col[r] *= mag[r];
        }
        out.columns[k] = std::move(col);
    });
    out.descriptors = std::move(layout);
    return out;
}

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw ParameterError("inner product of columns with different lengths");
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // conj(a) * b
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double euclidean_norm(std::span<const Complex> a) {
    double acc = 0.0;
    for (const auto& c : a) acc += std::norm(c);
    return std::sqrt(acc);
}

ProjectionTable ProjectionTable::leading(std::size_t k) const {
    if (k > size()) throw ParameterError("leading block larger than the table");
    ProjectionTable out;
    out.projections.assign(projections.begin(), projections.begin() + static_cast<std::ptrdiff_t>(k));
    out.norms.assign(norms.begin(), norms.begin() + static_cast<std::ptrdiff_t>(k));
    out.degenerate.assign(degenerate.begin(), degenerate.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

ProjectionTable ProjectionTable::scaled_energy(double factor) const {
    if (!(factor > 0.0)) throw ParameterError("energy scale must be positive");
    const double s = std::sqrt(factor);
    ProjectionTable out = *this;
    for (auto& row : out.projections)
        for (auto& c : row) c *= s;
    for (auto& n : out.norms) n *= s;
    return out;
}

OrthogonalBasis gram_schmidt(const RegressorMatrix& r) {
    const std::size_t k_cols = r.n_columns();
    if (r.n_rows < k_cols) throw ParameterError("gram_schmidt needs at least as many rows as columns");
    for (const auto& col : r.columns)
        if (col.size() != r.n_rows) throw ParameterError("regressor columns have unequal lengths");

    OrthogonalBasis b;
    b.descriptors = r.descriptors;
    b.n_rows = r.n_rows;
    b.memory_depth = r.memory_depth;
    b.columns.resize(k_cols);
    b.table.projections.resize(k_cols);
    b.table.norms.assign(k_cols, 0.0);
    b.table.degenerate.assign(k_cols, false);

    for (std::size_t k = 0; k < k_cols; ++k) {
        ComplexVector v = r.columns[k];
        const double original = euclidean_norm(v);
        auto& proj = b.table.projections[k];
        proj.assign(k, 0.0);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t l = 0; l < k; ++l) {
                if (b.table.degenerate[l]) continue;
                const Complex c = inner_product(b.columns[l], v);
                proj[l] += c;
                const auto& q = b.columns[l];
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
            }
        }
        const double residual = euclidean_norm(v);
        if (!(original > 0.0) || residual < kDegeneracyThreshold * original) {
            b.table.degenerate[k] = true;
            b.table.norms[k] = 0.0;
            std::fill(v.begin(), v.end(), Complex{});
        } else {
            b.table.norms[k] = residual;
            const double inv = 1.0 / residual;
            for (auto& c : v) c *= inv;
        }
        b.columns[k] = std::move(v);
    }
    return b;
}

RegressorMatrix reverse(const OrthogonalBasis& b) {
    const std::size_t k_cols = b.columns.size();
    const auto& t = b.table;
    if (t.size() != k_cols || t.projections.size() != k_cols || t.degenerate.size() != k_cols ||
        b.descriptors.size() != k_cols)
        throw ReconstructionError("orthogonal basis tables are inconsistent");

    RegressorMatrix out;
    out.descriptors = b.descriptors;
    out.n_rows = b.n_rows;
    out.memory_depth = b.memory_depth;
    out.columns.resize(k_cols);
    for (std::size_t k = 0; k < k_cols; ++k) {
        if (t.projections[k].size() != k || b.columns[k].size() != b.n_rows)
            throw ReconstructionError("projection row " + std::to_string(k) + " is malformed");
        ComplexVector a(b.n_rows, 0.0);
        for (std::size_t l = 0; l < k; ++l) {
            const Complex c = t.projections[k][l];
            const auto& q = b.columns[l];
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * q[i];
        }
        const double norm = t.norms[k];
        const auto& q = b.columns[k];
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += norm * q[i];
        out.columns[k] = std::move(a);
    }
    return out;
}

std::vector<ComplexVector> apply_projections(const RegressorMatrix& r, const ProjectionTable& table) {
    const std::size_t k_cols = table.size();
    if (r.n_columns() < k_cols) throw ParameterError("regressor has fewer columns than the projection table");
    std::vector<ComplexVector> q(k_cols);
    for (std::size_t k = 0; k < k_cols; ++k) {
        if (table.degenerate[k]) {
            q[k].assign(r.n_rows, 0.0);
            continue;
        }
        ComplexVector v = r.columns[k];
        for (std::size_t l = 0; l < k; ++l) {
            if (table.degenerate[l]) continue;
            const Complex c = table.projections[k][l];
            const auto& ql = q[l];
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * ql[i];
        }
        const double inv = 1.0 / table.norms[k];
        for (auto& c : v) c *= inv;
        q[k] = std::move(v);
    }
    return q;
}

ProjectionTable projections_from_autocorrelation(std::span<const Complex> r_u, int memory_depth) {
    if (memory_depth < 0) throw ParameterError("memory depth must be >= 0");
    const auto n = static_cast<std::size_t>(memory_depth) + 1;
    if (r_u.size() < n) throw ParameterError("autocorrelation needs at least M+1 lags");
    if (!(r_u[0].real() > 0.0) || std::abs(r_u[0].imag()) > 1e-12 * r_u[0].real())
        throw ParameterError("r_u(0) must be real and positive");

    // Gram entries <a_i, a_j> = sum conj(u(n-i)) u(n-j) = r_u(i - j) per sample.
    auto gram = [&](std::size_t i, std::size_t j) -> Complex {
        if (i >= j) return r_u[i - j];
        return std::conj(r_u[j - i]);
    };

    ProjectionTable t;
    t.projections.resize(n);
    t.norms.assign(n, 0.0);
    t.degenerate.assign(n, false);
    // Cholesky of the Gram matrix, G = R^H R with R[l][k] = P[k][l], R[k][k] = norm_k.
    for (std::size_t k = 0; k < n; ++k) {
        auto& pk = t.projections[k];
        pk.assign(k, 0.0);
        for (std::size_t l = 0; l < k; ++l) {
            if (t.degenerate[l]) continue;
            Complex acc = gram(l, k);
            for (std::size_t i = 0; i < l; ++i) acc -= std::conj(t.projections[l][i]) * pk[i];
            pk[l] = acc / t.norms[l];
        }
        double energy = gram(k, k).real();
        for (std::size_t l = 0; l < k; ++l) energy -= std::norm(pk[l]);
        const double diag = gram(k, k).real();
        if (!(energy > (kDegeneracyThreshold * kDegeneracyThreshold) * diag)) {
            t.degenerate[k] = true;
            t.norms[k] = 0.0;
        } else {
            t.norms[k] = std::sqrt(energy);
        }
    }
    return t;
}

}  // namespace kernelpa
