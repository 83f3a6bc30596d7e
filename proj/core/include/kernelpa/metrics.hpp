#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kernelpa/signal.hpp"

namespace kernelpa {

/// Reported in place of -inf for perfect matches.
inline constexpr double kMetricFloorDb = -150.0;

/// 10 log10(sum |y - y_hat|^2 / sum |y|^2), clamped below at kMetricFloorDb.
/// The leading max(y.warmup(), y_hat.warmup()) samples are skipped.
/// Throws MetricError if y is all zero, ParameterError on length mismatch.
[[nodiscard]] double nmse(const ComplexSignal& y, const ComplexSignal& y_hat);
/// Same on raw samples, no warmup skipping.
[[nodiscard]] double nmse(std::span<const Complex> y, std::span<const Complex> y_hat);

struct SpectrumEstimate {
    RealVector frequencies;  // Hz, ascending, -fs/2 .. fs/2 - df
    RealVector psd;          // power per Hz
    double resolution = 0.0;
    std::string window;
};

/// Welch estimate: Hann window, 50% overlap, two-sided. Scaled so that
/// sum(psd) * resolution equals the mean power of the record (warmup skipped).
/// segment_length must be a power of two no larger than the record.
[[nodiscard]] SpectrumEstimate psd(const ComplexSignal& s, std::size_t segment_length);

/// sum of psd * resolution over bins with lo <= f <= hi.
[[nodiscard]] double band_power(const SpectrumEstimate& spectrum, double lo, double hi);

/// Adjacent channel error power ratio of e = y_ref - y_hat:
///
///   10 log10( max(P_e(bw/2, 3bw/2], P_e[-3bw/2, -bw/2)) / P_ref[-bw/2, bw/2] )
///
/// Needs channel_bw < sample_rate / 3. The segment length is reduced to the
/// largest power of two that fits the record when necessary.
[[nodiscard]] double acepr(const ComplexSignal& y_ref, const ComplexSignal& y_hat, double channel_bw,
                           std::size_t segment_length = 1024);

/// One row per subset block, in evaluation order.
struct ContributionRow {
    std::string basis;   // e.g. "g0", "g0_1"
    std::string subset;  // lags joined with ';', e.g. "0;1"
    double dnmse_db = 0.0;
    double dacepr_db = 0.0;
    bool active = true;
};

struct ContributionReport {
    std::vector<ContributionRow> rows;
    double total_nmse_db = 0.0;
    double total_acepr_db = 0.0;
    std::vector<std::string> order;
};

/// Aligned columns with a trailing "Total" line.
void write_report_text(std::ostream& out, const ContributionReport& report);
/// CSV with header basis,subset,dnmse_db,dacepr_db. One row per block.
void write_report_csv(std::ostream& out, const ContributionReport& report);

/// Decimal rendering of a dB value; the floor prints as "<-150".
[[nodiscard]] std::string format_db(double value);

}  // namespace kernelpa
