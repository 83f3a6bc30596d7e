#include "kernelpa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fft.hpp"
#include "kernelpa/error.hpp"
#include "text_format.hpp"

namespace kernelpa {
namespace {

double to_db(double ratio) {
    if (!(ratio > 0.0)) return kMetricFloorDb;
    return std::max(kMetricFloorDb, 10.0 * std::log10(ratio));
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t floor_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p * 2 <= n) p *= 2;
    return p;
}

SpectrumEstimate welch(std::span<const Complex> x, double fs, std::size_t len) {
    if (!is_power_of_two(len) || len < 2) throw ParameterError("psd: segment length must be a power of two >= 2");
    if (len > x.size()) throw ParameterError("psd: record shorter than one segment");

    RealVector window(len);
    double wsum2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        // Periodic Hann.
        window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(len));
        wsum2 += window[i] * window[i];
    }

    const std::size_t hop = len / 2;
    const std::size_t segments = (x.size() - len) / hop + 1;
    detail::FftPlan plan(len, false);
    ComplexVector buf(len), spec(len);
    RealVector acc(len, 0.0);
    for (std::size_t s = 0; s < segments; ++s) {
        const std::size_t off = s * hop;
        for (std::size_t i = 0; i < len; ++i) buf[i] = x[off + i] * window[i];
        plan.execute(buf, spec);
        for (std::size_t k = 0; k < len; ++k) acc[k] += std::norm(spec[k]);
    }

    SpectrumEstimate out;
    out.window = "hann";
    out.resolution = fs / static_cast<double>(len);
    out.frequencies.resize(len);
    out.psd.resize(len);
    const double scale = 1.0 / (fs * wsum2 * static_cast<double>(segments));
    for (std::size_t i = 0; i < len; ++i) {
        // fftshift: bin k = i - len/2 (mod len).
        const std::size_t k = (i + len / 2) % len;
        out.frequencies[i] = (static_cast<double>(i) - static_cast<double>(len / 2)) * out.resolution;
        out.psd[i] = acc[k] * scale;
    }

    double mean = 0.0;
    for (const auto& c : x) mean += std::norm(c);
    mean /= static_cast<double>(x.size());
    double integral = 0.0;
    for (double p : out.psd) integral += p * out.resolution;
    if (integral > 0.0) {
        const double fix = mean / integral;
        for (double& p : out.psd) p *= fix;
    }
    return out;
}

std::span<const Complex> valid_part(const ComplexSignal& s, std::size_t skip) {
    return s.samples().subspan(skip);
}

}  // namespace

double nmse(std::span<const Complex> y, std::span<const Complex> y_hat) {
    if (y.size() != y_hat.size()) throw ParameterError("nmse: records differ in length");
    if (y.empty()) throw ParameterError("nmse: empty records");
    double err = 0.0, ref = 0.0;
    for (std::size_t n = 0; n < y.size(); ++n) {
        err += std::norm(y[n] - y_hat[n]);
        ref += std::norm(y[n]);
    }
    if (!(ref > 0.0)) throw MetricError("nmse: reference signal is all zero");
    return to_db(err / ref);
}

double nmse(const ComplexSignal& y, const ComplexSignal& y_hat) {
    if (y.size() != y_hat.size()) throw ParameterError("nmse: records differ in length");
    const std::size_t skip = std::max(y.warmup(), y_hat.warmup());
    if (skip >= y.size()) throw ParameterError("nmse: no samples after warmup");
    return nmse(valid_part(y, skip), valid_part(y_hat, skip));
}

SpectrumEstimate psd(const ComplexSignal& s, std::size_t segment_length) {
    return welch(valid_part(s, std::min(s.warmup(), s.size() - 1)), s.sample_rate(), segment_length);
}

double band_power(const SpectrumEstimate& spectrum, double lo, double hi) {
    double acc = 0.0;
    for (std::size_t i = 0; i < spectrum.psd.size(); ++i)
        if (spectrum.frequencies[i] >= lo && spectrum.frequencies[i] <= hi) acc += spectrum.psd[i];
    return acc * spectrum.resolution;
}

double acepr(const ComplexSignal& y_ref, const ComplexSignal& y_hat, double channel_bw,
             std::size_t segment_length) {
    if (y_ref.size() != y_hat.size()) throw ParameterError("acepr: records differ in length");
    if (y_ref.sample_rate() != y_hat.sample_rate()) throw ParameterError("acepr: sample rates differ");
    const double fs = y_ref.sample_rate();
    if (!(channel_bw > 0.0) || !(channel_bw < fs / 3.0))
        throw ParameterError("acepr: channel bandwidth must lie in (0, sample_rate / 3)");
    const std::size_t skip = std::max(y_ref.warmup(), y_hat.warmup());
    if (skip + 2 > y_ref.size()) throw ParameterError("acepr: no samples after warmup");

    const auto ref = valid_part(y_ref, skip);
    const auto hat = valid_part(y_hat, skip);
    ComplexVector e(ref.size());
    bool any = false;
    for (std::size_t n = 0; n < e.size(); ++n) {
        e[n] = ref[n] - hat[n];
        any = any || e[n] != Complex{};
    }
    const std::size_t len = std::min(segment_length, floor_power_of_two(ref.size()));

    const auto ref_spec = welch(ref, fs, len);
    const double half = 0.5 * channel_bw;
    double main = 0.0;
    for (std::size_t i = 0; i < ref_spec.psd.size(); ++i)
        if (std::abs(ref_spec.frequencies[i]) <= half) main += ref_spec.psd[i];
    main *= ref_spec.resolution;
    if (!(main > 0.0)) throw MetricError("acepr: reference has no main-channel power");
    if (!any) return kMetricFloorDb;

    const auto err_spec = welch(e, fs, len);
    double upper = 0.0, lower = 0.0;
    for (std::size_t i = 0; i < err_spec.psd.size(); ++i) {
        const double f = err_spec.frequencies[i];
        if (f > half && f <= 3.0 * half) upper += err_spec.psd[i];
        if (f < -half && f >= -3.0 * half) lower += err_spec.psd[i];
    }
    return to_db(std::max(upper, lower) * err_spec.resolution / main);
}

std::string format_db(double value) {
    if (value <= kMetricFloorDb) return "<-150";
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << value;
    return s.str();
}

void write_report_text(std::ostream& out, const ContributionReport& report) {
    std::size_t width = 5;
    for (const auto& r : report.rows) width = std::max(width, r.basis.size());
    auto line = [&](const std::string& name, const std::string& subset, const std::string& a,
                    const std::string& b, const std::string& flag) {
        out << std::left << std::setw(static_cast<int>(width) + 2) << name << std::setw(12) << subset
            << std::right << std::setw(10) << a << std::setw(11) << b;
        if (!flag.empty()) out << "  " << flag;
        out << '\n';
    };
    line("basis", "subset", "dNMSE[dB]", "dACEPR[dB]", "");
    for (const auto& r : report.rows)
        line(r.basis, r.subset, format_db(r.dnmse_db), format_db(r.dacepr_db), r.active ? "" : "(inactive)");
    line("Total", "", format_db(report.total_nmse_db), format_db(report.total_acepr_db), "");
}

void write_report_csv(std::ostream& out, const ContributionReport& report) {
    out << "basis,subset,dnmse_db,dacepr_db\n";
    for (const auto& r : report.rows)
        out << r.basis << ',' << r.subset << ',' << detail::format_double(r.dnmse_db) << ','
            << detail::format_double(r.dacepr_db) << '\n';
}

}  // namespace kernelpa
