#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace kernelpa::detail {

/// Unnormalized complex DFT of a fixed length backed by FFTW. Plans are
/// created with FFTW_ESTIMATE | FFTW_UNALIGNED, so results are deterministic
/// and `execute` may run on any buffer of the planned length.
class FftPlan {
public:
    FftPlan(std::size_t n, bool inverse);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    /// Out-of-place or in-place transform; both spans must have size().
    void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

private:
    std::size_t n_;
    void* plan_;
};

/// y = DFT(x) (inverse: unnormalized inverse DFT).
void fft_inplace(std::span<std::complex<double>> x, bool inverse);

[[nodiscard]] std::size_t next_power_of_two(std::size_t n);

}  // namespace kernelpa::detail
