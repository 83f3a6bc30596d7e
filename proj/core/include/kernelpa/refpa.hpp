#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "kernelpa/signal.hpp"

namespace kernelpa {

/// Memory polynomial
///
///   y(n) = sum_{p in 1,3,5,7} sum_{m=0}^{2} c_{p,m} u(n-m) |u(n-m)|^(p-1) + noise
///
/// used as a synthetic device under test. The default coefficients are
/// invented values, not measurements.
struct ReferencePAConfig {
    static constexpr int kOrders = 4;  // p = 1, 3, 5, 7
    static constexpr int kLags = 3;    // m = 0, 1, 2

    /// coefficients[i][m] multiplies the order p = 2i + 1 term at lag m.
    std::array<std::array<Complex, kLags>, kOrders> coefficients{};
    /// Additive complex white noise in dB relative to the noiseless output
    /// power; empty disables noise.
    std::optional<double> noise_floor_db;
    std::uint64_t seed = 0;
    /// Pole of a one-pole low-pass applied to the input before the
    /// polynomial (0 disables it). Produces out-of-class behaviour.
    double wiener_pole = 0.0;

    [[nodiscard]] Complex& c(int p, int m);
    [[nodiscard]] Complex c(int p, int m) const;
    void validate() const;

    friend bool operator==(const ReferencePAConfig&, const ReferencePAConfig&) = default;
};

/// Soft compression (about 1.2 dB at unit drive) with AM/PM and memory taps
/// at lags 1 and 2. Noise disabled.
[[nodiscard]] ReferencePAConfig default_config();

/// default_config() with only the terms of the six-term structure
/// u|u|^(2k), k = 0..3, plus linear u(n-1) and u(n-2).
[[nodiscard]] ReferencePAConfig restricted_config();

/// First 2 output samples are flagged warmup (on top of the input warmup).
[[nodiscard]] ComplexSignal reference_pa(const ComplexSignal& u, const ReferencePAConfig& cfg);

/// key=value text: "c_<p>_<m> = re,im", "noise_floor_db = <dB>|off",
/// "seed = <n>", "wiener_pole = <a>". Missing coefficients are zero.
[[nodiscard]] ReferencePAConfig parse_pa_config(const std::string& text);
[[nodiscard]] std::string format_pa_config(const ReferencePAConfig& cfg);
[[nodiscard]] ReferencePAConfig load_pa_config(const std::string& path);
void save_pa_config(const std::string& path, const ReferencePAConfig& cfg);

}  // namespace kernelpa
