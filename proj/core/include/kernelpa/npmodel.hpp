#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kernelpa/kernel.hpp"
#include "kernelpa/metrics.hpp"
#include "kernelpa/regressor.hpp"
#include "kernelpa/signal.hpp"

namespace kernelpa {

struct FitOptions {
    int memory_depth = 3;
    int max_dimension = 3;
    std::size_t grid_points = 70;
    double aperture_fraction = 1.0 / 70.0;
    /// Second stagewise pass that re-estimates every basis against the
    /// residual left by the first pass and adds the correction.
    bool refine = false;
    /// Behaviour of predict() outside the training amplitude support.
    Extrapolation extrapolation = Extrapolation::Clamp;

    void validate() const;
    friend bool operator==(const FitOptions&, const FitOptions&) = default;
};

struct BasisEntry {
    BasisDescriptor descriptor;
    std::optional<KernelFunctionEstimate> estimate;  // empty for degenerate columns
    bool active = true;
    bool degenerate = false;

    friend bool operator==(const BasisEntry&, const BasisEntry&) = default;
};

/// All carrier-lag columns of one lag subset; added and pruned together.
struct SubsetBlock {
    std::vector<int> subset;  // descending, as in BasisDescriptor
    std::size_t first = 0;    // index of the first entry
    std::size_t count = 0;

    /// "g0", "g0_1", ...
    [[nodiscard]] std::string basis_label() const;
    /// "0", "0;1", ...
    [[nodiscard]] std::string subset_label() const;
};

/// Sum over active bases of g_k(|q_k(n)|) e^{j arg q_k(n)}, where q_k are
/// the orthogonalized regressor columns rebuilt from the input with the
/// frozen training-time projection table.
struct NonParametricModel {
    FitOptions options;
    std::vector<BasisEntry> entries;  // regressor column order
    ProjectionTable projections;
    std::size_t training_samples = 0;
    std::string input_label;

    [[nodiscard]] std::vector<SubsetBlock> blocks() const;
    [[nodiscard]] std::size_t active_count() const noexcept;
    /// Throws ParameterError when the invariants do not hold.
    void validate() const;

    friend bool operator==(const NonParametricModel&, const NonParametricModel&) = default;
};

struct MagnitudePhase {
    std::vector<RealVector> x;        // |q_k(n)| for every basis column
    ComplexVector z;                  // y(n) e^{-j arg q_0(n)}
    std::vector<std::uint8_t> valid;  // 0 where q_0(n) == 0 (phase undefined)
};

/// y must have b.n_rows samples (already trimmed by the memory depth).
[[nodiscard]] MagnitudePhase magnitude_phase_transform(const OrthogonalBasis& b, const ComplexSignal& y);
[[nodiscard]] MagnitudePhase magnitude_phase_transform(const OrthogonalBasis& b, std::span<const Complex> y);

/// Fits one kernel estimate per regressor column. Columns are estimated in
/// order, each against the part of y not yet explained by the columns
/// before it, rotated by the column's own phase. Both records are trimmed
/// by the larger of their warmups first.
[[nodiscard]] NonParametricModel fit(const ComplexSignal& u, const ComplexSignal& y,
                                     const FitOptions& options = {});

/// Output has u.size() samples; the first u.warmup() + M are flagged warmup
/// and are zero.
[[nodiscard]] ComplexSignal predict(const NonParametricModel& m, const ComplexSignal& u);

/// Per-entry output contributions (empty vectors for inactive entries).
[[nodiscard]] std::vector<ComplexVector> basis_outputs(const NonParametricModel& m, const ComplexSignal& u);

/// Cumulative evaluation in block order. Row k holds the change in NMSE and
/// ACEPR caused by adding block k; row 1 is the first block alone. Inactive
/// blocks contribute zero. channel_bw <= 0 uses y.bandwidth().
[[nodiscard]] ContributionReport contribution_table(const NonParametricModel& m, const ComplexSignal& u,
                                                    const ComplexSignal& y, double channel_bw = 0.0);

/// Deactivates every block whose |dNMSE| < |threshold| (threshold < 0 dB).
/// The block of lag 0 alone is never pruned.
[[nodiscard]] NonParametricModel prune(const NonParametricModel& m, const ContributionReport& report,
                                       double threshold_db);
[[nodiscard]] NonParametricModel prune(const NonParametricModel& m, const ComplexSignal& u,
                                       const ComplexSignal& y, double threshold_db);

}  // namespace kernelpa
