#include "kernelpa/refpa.hpp"

#include <cmath>

#include "kernelpa/error.hpp"
#include "random.hpp"
#include "text_format.hpp"

namespace kernelpa {
namespace {

int order_index(int p) {
    if (p < 1 || p > 7 || p % 2 == 0) throw ParameterError("reference PA order must be 1, 3, 5 or 7");
    return (p - 1) / 2;
}

void check_lag(int m) {
    if (m < 0 || m >= ReferencePAConfig::kLags) throw ParameterError("reference PA lag must be 0, 1 or 2");
}

}  // namespace

Complex& ReferencePAConfig::c(int p, int m) {
    check_lag(m);
    return coefficients[static_cast<std::size_t>(order_index(p))][static_cast<std::size_t>(m)];
}

Complex ReferencePAConfig::c(int p, int m) const {
    check_lag(m);
    return coefficients[static_cast<std::size_t>(order_index(p))][static_cast<std::size_t>(m)];
}

void ReferencePAConfig::validate() const {
    if (c(1, 0) == Complex{}) throw ParameterError("reference PA needs a nonzero linear gain c_1_0");
    if (noise_floor_db && !(*noise_floor_db <= -20.0))
        throw ParameterError("reference PA noise floor must be <= -20 dB");
    if (!(wiener_pole >= 0.0 && wiener_pole < 1.0)) throw ParameterError("wiener pole must lie in [0, 1)");
    for (const auto& row : coefficients)
        for (const auto& v : row)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw ParameterError("reference PA coefficients must be finite");
}

ReferencePAConfig default_config() {
    ReferencePAConfig cfg;
    cfg.c(1, 0) = {1.0, 0.0};
    cfg.c(3, 0) = {-0.094, 0.033};
    cfg.c(5, 0) = {0.0089, -0.0047};
    cfg.c(7, 0) = {-0.00027, 0.00019};
    cfg.c(1, 1) = {0.10, -0.04};
    cfg.c(1, 2) = {-0.06, 0.03};
    cfg.c(3, 1) = {0.0, 0.002};
    return cfg;
}

ReferencePAConfig restricted_config() {
    auto cfg = default_config();
    cfg.c(3, 1) = 0.0;
    return cfg;
}

ComplexSignal reference_pa(const ComplexSignal& u, const ReferencePAConfig& cfg) {
    cfg.validate();
    const std::size_t n = u.size();
    ComplexVector v(u.samples().begin(), u.samples().end());
    if (cfg.wiener_pole > 0.0) {
        const double a = cfg.wiener_pole;
        Complex state = 0.0;
        for (auto& s : v) {
            state = (1.0 - a) * s + a * state;
            s = state;
        }
    }

    ComplexVector y(n, 0.0);
    for (int m = 0; m < ReferencePAConfig::kLags; ++m) {
        const auto lag = static_cast<std::size_t>(m);
        for (std::size_t i = lag; i < n; ++i) {
            const Complex x = v[i - lag];
            const double r2 = std::norm(x);
            Complex acc = 0.0;
            double w = 1.0;
            for (int o = 0; o < ReferencePAConfig::kOrders; ++o) {
                acc += cfg.coefficients[static_cast<std::size_t>(o)][lag] * w;
                w *= r2;
            }
            y[i] += acc * x;
        }
    }

    if (cfg.noise_floor_db) {
        double power = 0.0;
        for (const auto& s : y) power += std::norm(s);
        power /= static_cast<double>(n);
        const double sigma = std::sqrt(power * std::pow(10.0, *cfg.noise_floor_db / 10.0));
        detail::ComplexGaussian noise(cfg.seed);
        for (auto& s : y) s += sigma * noise();
    }
    const std::size_t warm = std::min(n, u.warmup() + 2);
    return u.with_samples(std::move(y), "refpa(" + u.label() + ")", warm);
}

ReferencePAConfig parse_pa_config(const std::string& text) {
    const auto kv = detail::parse_key_values(text);
    ReferencePAConfig cfg;
    for (const auto& [key, value] : kv) {
        if (key == "noise_floor_db") {
            if (detail::trim(value) == "off")
                cfg.noise_floor_db.reset();
            else
                cfg.noise_floor_db = detail::parse_double(value);
        } else if (key == "seed") {
            const auto s = detail::parse_int(value);
            if (s < 0) throw FormatError("seed must be nonnegative");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (key == "wiener_pole") {
            cfg.wiener_pole = detail::parse_double(value);
        } else if (key.rfind("c_", 0) == 0) {
            const auto parts = detail::split(key, '_');
            if (parts.size() != 3) throw FormatError("bad coefficient key '" + key + "'");
            const auto p = static_cast<int>(detail::parse_int(parts[1]));
            const auto m = static_cast<int>(detail::parse_int(parts[2]));
            try {
                cfg.c(p, m) = detail::parse_complex(value);
            } catch (const ParameterError& e) {
                throw FormatError("bad coefficient key '" + key + "': " + e.what());
            }
        } else {
            throw FormatError("unknown reference PA key '" + key + "'");
        }
    }
    try {
        cfg.validate();
    } catch (const ParameterError& e) {
        throw FormatError(std::string("reference PA config: ") + e.what());
    }
    return cfg;
}

std::string format_pa_config(const ReferencePAConfig& cfg) {
    std::string out;
    for (int o = 0; o < ReferencePAConfig::kOrders; ++o)
        for (int m = 0; m < ReferencePAConfig::kLags; ++m) {
            const int p = 2 * o + 1;
            out += "c_" + std::to_string(p) + "_" + std::to_string(m) + " = " + detail::format_complex(cfg.c(p, m)) + "\n";
        }
    out += "noise_floor_db = " + (cfg.noise_floor_db ? detail::format_double(*cfg.noise_floor_db) : std::string("off")) + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    out += "wiener_pole = " + detail::format_double(cfg.wiener_pole) + "\n";
    return out;
}

ReferencePAConfig load_pa_config(const std::string& path) { return parse_pa_config(detail::read_text_file(path)); }

void save_pa_config(const std::string& path, const ReferencePAConfig& cfg) {
    detail::write_text_file(path, format_pa_config(cfg));
}

}  // namespace kernelpa
