#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kernelpa {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

/// Uniformly sampled complex baseband record.
///
/// Immutable after construction. `warmup()` counts leading samples that are
/// not valid outputs (e.g. the memory transient of a model or PA); metrics
/// skip them.
class ComplexSignal {
public:
    /// Throws ParameterError when samples is empty, any sample is non-finite,
    /// sample_rate <= 0 or bandwidth is outside (0, sample_rate].
    ComplexSignal(ComplexVector samples, double sample_rate, double bandwidth,
                  std::string label = {}, std::size_t warmup = 0);

    [[nodiscard]] std::span<const Complex> samples() const noexcept { return samples_; }
    [[nodiscard]] const Complex& operator[](std::size_t i) const noexcept { return samples_[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] double sample_rate() const noexcept { return sample_rate_; }
    [[nodiscard]] double bandwidth() const noexcept { return bandwidth_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] std::size_t warmup() const noexcept { return warmup_; }

    /// New signal with the same metadata and different samples.
    [[nodiscard]] ComplexSignal with_samples(ComplexVector samples, std::string label = {},
                                             std::size_t warmup = 0) const;
    /// Contiguous sub-record [begin, begin + count). Warmup is carried over
    /// for the part of the transient that falls inside the slice.
    [[nodiscard]] ComplexSignal slice(std::size_t begin, std::size_t count) const;
    [[nodiscard]] ComplexSignal scaled(Complex factor) const;

    [[nodiscard]] double mean_power() const noexcept;

    friend bool operator==(const ComplexSignal&, const ComplexSignal&) = default;

private:
    ComplexVector samples_;
    double sample_rate_;
    double bandwidth_;
    std::string label_;
    std::size_t warmup_;
};

/// Band-limited circularly-symmetric noise: white complex Gaussian samples,
/// brick-wall filtered to [-bandwidth/2, +bandwidth/2] and scaled to unit
/// mean power. Deterministic for a fixed seed.
[[nodiscard]] ComplexSignal generate_signal(std::size_t n_samples, double sample_rate,
                                            double bandwidth, std::uint64_t seed);

/// Peak-to-average power ratio in dB. Throws MetricError for an all-zero signal.
[[nodiscard]] double papr(const ComplexSignal& s);

/// Zeroes every FFT bin outside [-bandwidth/2, +bandwidth/2].
[[nodiscard]] ComplexVector bandlimit(std::span<const Complex> samples, double sample_rate,
                                      double bandwidth);

struct ClipOptions {
    int iterations = 3;
};

/// Clip-and-filter crest factor reduction. Each pass limits magnitudes to
/// sqrt(P_mean * 10^(L/10)) (phase preserved) and re-filters to the signal
/// bandwidth, with P_mean the current mean power. L starts at the target and
/// is lowered by the PAPR regrowth of the previous pass; passes stop early
/// once the result is within 0.25 dB of the target. A signal already at or
/// below the target is returned unchanged.
[[nodiscard]] ComplexSignal clip(const ComplexSignal& s, double target_papr_db,
                                 const ClipOptions& options = {});

struct AlignOptions {
    /// Minimum normalized cross-correlation peak |c| / (|ref| |meas|).
    double min_correlation = 0.2;
};

struct AlignResult {
    ComplexSignal aligned;
    /// `measured[n + delay]` lines up with `reference[n]`.
    long delay;
    double phase;
    /// Index into the reference of the first aligned sample.
    std::size_t reference_offset;
    double peak_correlation;
};

/// Integer-delay and constant-phase alignment of `measured` onto
/// `reference`, trimmed to the overlap. Throws AlignmentError when the
/// correlation peak is below `options.min_correlation`.
[[nodiscard]] AlignResult align(const ComplexSignal& reference, const ComplexSignal& measured,
                                const AlignOptions& options = {});

/// Delays a record by `delay` samples (zero-filled) and rotates it by
/// e^{j phase}. Used to build alignment scenarios.
[[nodiscard]] ComplexSignal shift_rotate(const ComplexSignal& s, std::size_t delay, double phase);

}  // namespace kernelpa
