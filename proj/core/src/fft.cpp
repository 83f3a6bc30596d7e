#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "kernelpa/error.hpp"

namespace kernelpa::detail {
namespace {

// FFTW's planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

FftPlan::FftPlan(std::size_t n, bool inverse) : n_(n), plan_(nullptr) {
    if (n == 0) throw ParameterError("FFT length must be positive");
    std::lock_guard lock(planner_mutex());
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), in, out, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    if (plan_ == nullptr) throw ParameterError("FFTW planning failed");
}

FftPlan::~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void FftPlan::execute(std::span<const std::complex<double>> in,
                      std::span<std::complex<double>> out) const {
    if (in.size() != n_ || out.size() != n_) throw ParameterError("FFT buffer length mismatch");
    // The plan is out-of-place; in-place requests go through a copy.
    std::vector<std::complex<double>> scratch;
    if (in.data() == out.data()) {
        scratch.assign(in.begin(), in.end());
        in = scratch;
    }
    // fftw_complex is layout-compatible with std::complex<double>.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_), src, dst);
}

void fft_inplace(std::span<std::complex<double>> x, bool inverse) {
    FftPlan plan(x.size(), inverse);
    plan.execute(x, x);
}

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace kernelpa::detail
