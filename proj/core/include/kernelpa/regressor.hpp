#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kernelpa/signal.hpp"

namespace kernelpa {

/// One column of the augmented input space: the carrier sample
/// u(n - carrier_lag) scaled by the magnitudes of the other lags of the
/// subset. A single-lag subset is the plain delayed sample.
struct BasisDescriptor {
    /// Distinct lags in descending order (m_1 > ... > m_p >= 0).
    std::vector<int> subset;
    int carrier_lag = 0;

    [[nodiscard]] std::size_t dimension() const noexcept { return subset.size(); }
    /// Lags in ascending order joined with ',' (e.g. "0,1").
    [[nodiscard]] std::string subset_label() const;
    /// Throws ParameterError unless lags are distinct, descending, inside
    /// [0, max_lag] and the carrier belongs to the subset.
    void validate(int max_lag) const;

    friend bool operator==(const BasisDescriptor&, const BasisDescriptor&) = default;
};

/// Descriptors in canonical column order: all single lags ascending, then
/// two-lag subsets in lexicographic order (ascending lags) each contributing
/// one column per carrier lag (ascending), then three-lag subsets, ...
[[nodiscard]] std::vector<BasisDescriptor> basis_layout(int memory_depth, int max_dimension);

/// Number of columns of basis_layout: sum over d of C(M+1, d) * d.
[[nodiscard]] std::size_t column_count(int memory_depth, int max_dimension);

struct RegressorMatrix {
    std::vector<BasisDescriptor> descriptors;
    /// Column-major: columns[k][row]. Row r corresponds to input sample r + M.
    std::vector<ComplexVector> columns;
    std::size_t n_rows = 0;
    int memory_depth = 0;

    [[nodiscard]] std::size_t n_columns() const noexcept { return columns.size(); }
};

/// Builds the delayed and augmented regressor set. The first M input samples
/// are discarded, so every column has u.size() - M rows.
[[nodiscard]] RegressorMatrix build_regressor_set(const ComplexSignal& u, int memory_depth,
                                                  int max_dimension);
/// Same as above on raw samples. Needs only samples.size() > memory_depth.
[[nodiscard]] RegressorMatrix build_regressor_set(std::span<const Complex> u, int memory_depth,
                                                  int max_dimension);

/// Coefficients of a column-wise Gram-Schmidt process:
///
///   a_k = sum_{l<k} projections[k][l] q_l + norms[k] q_k
///
/// with unit-norm q. projections[k] has k entries. Degenerate columns have
/// norm 0 and q_k = 0.
struct ProjectionTable {
    std::vector<ComplexVector> projections;
    std::vector<double> norms;
    std::vector<bool> degenerate;

    [[nodiscard]] std::size_t size() const noexcept { return norms.size(); }
    /// Leading k x k block (valid because GS never looks ahead).
    [[nodiscard]] ProjectionTable leading(std::size_t k) const;
    /// Coefficients for a record whose inner products are `factor` times
    /// larger in energy: all entries scale by sqrt(factor).
    [[nodiscard]] ProjectionTable scaled_energy(double factor) const;
    friend bool operator==(const ProjectionTable&, const ProjectionTable&) = default;
};

struct OrthogonalBasis {
    std::vector<BasisDescriptor> descriptors;
    std::vector<ComplexVector> columns;
    ProjectionTable table;
    std::size_t n_rows = 0;
    int memory_depth = 0;
};

/// Relative residual-norm threshold below which a column is degenerate.
inline constexpr double kDegeneracyThreshold = 1e-10;

/// Modified Gram-Schmidt in column order with one re-orthogonalization pass.
/// Columns are normalized to unit Euclidean norm; the norms and the
/// projections of both passes are recorded so the process can be reversed.
[[nodiscard]] OrthogonalBasis gram_schmidt(const RegressorMatrix& r);

/// Reconstructs the original columns from the orthogonal ones.
[[nodiscard]] RegressorMatrix reverse(const OrthogonalBasis& b);

/// Orthogonal columns for new data using frozen coefficients:
/// q_k = (a_k - sum_{l<k} P[k][l] q_l) / norms[k].
/// Only the first `table.size()` columns of `r` are used.
[[nodiscard]] std::vector<ComplexVector> apply_projections(const RegressorMatrix& r,
                                                           const ProjectionTable& table);

/// Projection table of the single-lag columns u(n), ..., u(n-M) from the
/// autocorrelation r_u(m) = E[u(n+m) u*(n)], m = 0..M, assuming
/// wide-sense stationarity. Scaled per sample: multiply energies by the
/// record length (scaled_energy) to compare with gram_schmidt output.
[[nodiscard]] ProjectionTable projections_from_autocorrelation(std::span<const Complex> r_u,
                                                               int memory_depth);

/// <a, b> = sum conj(a[n]) b[n], accumulated in index order.
[[nodiscard]] Complex inner_product(std::span<const Complex> a, std::span<const Complex> b);
[[nodiscard]] double euclidean_norm(std::span<const Complex> a);

}  // namespace kernelpa
