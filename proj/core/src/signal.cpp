#include "kernelpa/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fft.hpp"
#include "kernelpa/error.hpp"
#include "random.hpp"

namespace kernelpa {
namespace {

bool all_finite(std::span<const Complex> xs) {
    return std::all_of(xs.begin(), xs.end(),
                       [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

double peak_power(std::span<const Complex> xs) {
    double peak = 0.0;
    for (const auto& c : xs) peak = std::max(peak, std::norm(c));
    return peak;
}

double mean_power_of(std::span<const Complex> xs) {
    double acc = 0.0;
    for (const auto& c : xs) acc += std::norm(c);
    return acc / static_cast<double>(xs.size());
}

double papr_of(std::span<const Complex> xs) {
    const double mean = mean_power_of(xs);
    if (!(mean > 0.0)) throw MetricError("PAPR of an all-zero signal is undefined");
    return 10.0 * std::log10(peak_power(xs) / mean);
}

}  // namespace

ComplexSignal::ComplexSignal(ComplexVector samples, double sample_rate, double bandwidth,
                             std::string label, std::size_t warmup)
    : samples_(std::move(samples)),
      sample_rate_(sample_rate),
      bandwidth_(bandwidth),
      label_(std::move(label)),
      warmup_(warmup) {
    if (samples_.empty()) throw ParameterError("signal must contain at least one sample");
    if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_))
        throw ParameterError("sample rate must be positive");
    if (!(bandwidth_ > 0.0) || bandwidth_ > sample_rate_)
        throw ParameterError("bandwidth must lie in (0, sample_rate]");
    if (!all_finite(samples_)) throw ParameterError("signal contains non-finite samples");
    warmup_ = std::min(warmup_, samples_.size());
}

ComplexSignal ComplexSignal::with_samples(ComplexVector samples, std::string label,
                                          std::size_t warmup) const {
    return ComplexSignal(std::move(samples), sample_rate_, bandwidth_,
                         label.empty() ? label_ : std::move(label), warmup);
}

ComplexSignal ComplexSignal::slice(std::size_t begin, std::size_t count) const {
    if (begin >= samples_.size() || count == 0 || count > samples_.size() - begin)
        throw ParameterError("slice out of range");
    ComplexVector part(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
                       samples_.begin() + static_cast<std::ptrdiff_t>(begin + count));
    const std::size_t warm = warmup_ > begin ? std::min(count, warmup_ - begin) : 0;
    return ComplexSignal(std::move(part), sample_rate_, bandwidth_, label_, warm);
}

ComplexSignal ComplexSignal::scaled(Complex factor) const {
    ComplexVector out(samples_);
    for (auto& c : out) c *= factor;
    return with_samples(std::move(out), {}, warmup_);
}

double ComplexSignal::mean_power() const noexcept { return mean_power_of(samples_); }

ComplexVector bandlimit(std::span<const Complex> samples, double sample_rate, double bandwidth) {
    const std::size_t n = samples.size();
    ComplexVector spectrum(samples.begin(), samples.end());
    detail::fft_inplace(spectrum, false);
    const double half = 0.5 * bandwidth;
    for (std::size_t k = 0; k < n; ++k) {
        // Two-sided frequency of bin k, as in numpy.fft.fftfreq.
        const double idx = (k <= (n - 1) / 2) ? static_cast<double>(k)
                                              : static_cast<double>(k) - static_cast<double>(n);
        const double f = idx * sample_rate / static_cast<double>(n);
        if (std::abs(f) > half) spectrum[k] = 0.0;
    }
    detail::fft_inplace(spectrum, true);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : spectrum) c *= scale;
    return spectrum;
}

ComplexSignal generate_signal(std::size_t n_samples, double sample_rate, double bandwidth,
                              std::uint64_t seed) {
    if (n_samples < 64) throw ParameterError("generate_signal needs at least 64 samples");
    if (!(sample_rate > 0.0)) throw ParameterError("sample rate must be positive");
    if (!(bandwidth > 0.0) || bandwidth > sample_rate)
        throw ParameterError("bandwidth must lie in (0, sample_rate]");

    detail::ComplexGaussian source(seed);
    ComplexVector white(n_samples);
    for (auto& c : white) c = source();

    ComplexVector shaped = bandlimit(white, sample_rate, bandwidth);
    const double power = mean_power_of(shaped);
    if (!(power > 0.0)) throw ParameterError("bandwidth too narrow: no frequency bins retained");
    const double scale = 1.0 / std::sqrt(power);
    for (auto& c : shaped) c *= scale;
    return ComplexSignal(std::move(shaped), sample_rate, bandwidth,
                         "noise seed=" + std::to_string(seed));
}

double papr(const ComplexSignal& s) { return papr_of(s.samples()); }

ComplexSignal clip(const ComplexSignal& s, double target_papr_db, const ClipOptions& options) {
    if (!(target_papr_db > 0.0)) throw ParameterError("target PAPR must be positive");
    if (options.iterations < 1) throw ParameterError("clip needs at least one iteration");
    if (papr(s) <= target_papr_db) return s;

    // The clip level tracks the regrowth left by each filtering pass.
    ComplexVector x(s.samples().begin(), s.samples().end());
    double level = target_papr_db;
    for (int it = 0; it < options.iterations; ++it) {
        const double power = mean_power_of(x);
        const double threshold = std::sqrt(power * std::pow(10.0, level / 10.0));
        for (auto& c : x) {
            const double a = std::abs(c);
            if (a > threshold) c *= threshold / a;
        }
        x = bandlimit(x, s.sample_rate(), s.bandwidth());
        const double now = papr_of(x);
        if (now <= target_papr_db + 0.25) break;
        level = std::max(0.1, level - (now - target_papr_db));
    }
    return s.with_samples(std::move(x), s.label() + " clipped", s.warmup());
}

AlignResult align(const ComplexSignal& reference, const ComplexSignal& measured,
                  const AlignOptions& options) {
    if (reference.sample_rate() != measured.sample_rate())
        throw ParameterError("align: sample rates differ");
    const std::size_t nr = reference.size();
    const std::size_t nm = measured.size();
    if (nm > 2 * nr || nr > 2 * nm) throw ParameterError("align: record lengths differ by more than 2x");

    // c(d) = sum_n conj(ref[n]) meas[n + d], via zero-padded FFT correlation.
    const std::size_t nfft = detail::next_power_of_two(nr + nm);
    ComplexVector fr(nfft, 0.0), fm(nfft, 0.0);
    std::copy(reference.samples().begin(), reference.samples().end(), fr.begin());
    std::copy(measured.samples().begin(), measured.samples().end(), fm.begin());
    detail::fft_inplace(fr, false);
    detail::fft_inplace(fm, false);
    for (std::size_t k = 0; k < nfft; ++k) fm[k] *= std::conj(fr[k]);
    detail::fft_inplace(fm, true);

    long best_delay = 0;
    double best = -1.0;
    const long max_pos = static_cast<long>(nm) - 1;
    const long max_neg = static_cast<long>(nr) - 1;
    for (long d = -max_neg; d <= max_pos; ++d) {
        const std::size_t idx = d >= 0 ? static_cast<std::size_t>(d)
                                       : nfft - static_cast<std::size_t>(-d);
        const double mag = std::abs(fm[idx]);
        if (mag > best) {
            best = mag;
            best_delay = d;
        }
    }

    // The inverse transform is unnormalized.
    const double scale = static_cast<double>(nfft) * std::sqrt(reference.mean_power() * static_cast<double>(nr) *
                                                               measured.mean_power() * static_cast<double>(nm));
    const double peak = scale > 0.0 ? best / scale : 0.0;
    if (!(peak >= options.min_correlation))
        throw AlignmentError("align: correlation peak " + std::to_string(peak) +
                             " below threshold " + std::to_string(options.min_correlation));

    const std::size_t ref_begin = best_delay < 0 ? static_cast<std::size_t>(-best_delay) : 0;
    const long ref_end_l = std::min(static_cast<long>(nr), static_cast<long>(nm) - best_delay);
    const std::size_t ref_end = static_cast<std::size_t>(ref_end_l);
    if (ref_end <= ref_begin) throw AlignmentError("align: empty overlap");

    Complex cross = 0.0;
    for (std::size_t n = ref_begin; n < ref_end; ++n)
        cross += std::conj(reference[n]) * measured[static_cast<std::size_t>(static_cast<long>(n) + best_delay)];
    const double phase = std::arg(cross);
    const Complex derotate = std::polar(1.0, -phase);

    ComplexVector out;
    out.reserve(ref_end - ref_begin);
    for (std::size_t n = ref_begin; n < ref_end; ++n)
        out.push_back(measured[static_cast<std::size_t>(static_cast<long>(n) + best_delay)] * derotate);

    return AlignResult{measured.with_samples(std::move(out), measured.label() + " aligned"), best_delay,
                       phase, ref_begin, peak};
}

ComplexSignal shift_rotate(const ComplexSignal& s, std::size_t delay, double phase) {
    const Complex rot = std::polar(1.0, phase);
    ComplexVector out(s.size(), 0.0);
    for (std::size_t n = delay; n < s.size(); ++n) out[n] = s[n - delay] * rot;
    return s.with_samples(std::move(out), s.label() + " shifted", std::min(s.size(), s.warmup() + delay));
}

}  // namespace kernelpa
