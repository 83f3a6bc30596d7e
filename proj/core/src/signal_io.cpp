#include "kernelpa/signal_io.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "kernelpa/error.hpp"
#include "text_format.hpp"

namespace kernelpa {
namespace {

void put_le64(std::string& out, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>(bits & 0xffu));
        bits >>= 8;
    }
}

double get_le64(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
    return std::bit_cast<double>(bits);
}

std::string sanitize_label(const std::string& label) {
    std::string out = label;
    std::replace_if(out.begin(), out.end(), [](char c) { return c == '\n' || c == '\r' || c == '#'; }, ' ');
    return out;
}

// Whole-number rates are written without an exponent.
std::string format_rate(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
    return detail::format_double(v);
}

}  // namespace

std::string sidecar_path(const std::string& path) { return path + ".meta"; }

IqFormat format_for_path(const std::string& path) {
    const std::string ext = ".csv";
    if (path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
        return IqFormat::Csv;
    return IqFormat::Binary;
}

void write_iq(const std::string& path, const ComplexSignal& s, IqFormat format) {
    std::string payload;
    if (format == IqFormat::Binary) {
        payload.reserve(s.size() * 16);
        for (const auto& c : s.samples()) {
            put_le64(payload, c.real());
            put_le64(payload, c.imag());
        }
    } else {
        payload = "i,q\n";
        for (const auto& c : s.samples())
            payload += detail::format_double(c.real()) + "," + detail::format_double(c.imag()) + "\n";
    }
    detail::write_text_file(path, payload);

    std::string meta;
    meta += "sample_rate_hz=" + format_rate(s.sample_rate()) + "\n";
    meta += "bandwidth_hz=" + format_rate(s.bandwidth()) + "\n";
    meta += "label=" + sanitize_label(s.label()) + "\n";
    meta += "n_samples=" + std::to_string(s.size()) + "\n";
    meta += std::string("format=") + (format == IqFormat::Csv ? "csv" : "bin") + "\n";
    if (s.warmup() > 0) meta += "warmup=" + std::to_string(s.warmup()) + "\n";
    detail::write_text_file(sidecar_path(path), meta);
}

ComplexSignal read_iq(const std::string& path) {
    const auto meta = detail::parse_key_values(detail::read_text_file(sidecar_path(path)));
    auto required = [&](const char* key) -> const std::string& {
        auto it = meta.find(key);
        if (it == meta.end()) throw FormatError(sidecar_path(path) + ": missing key '" + key + "'");
        return it->second;
    };
    const double rate = detail::parse_double(required("sample_rate_hz"));
    const double bandwidth = detail::parse_double(required("bandwidth_hz"));
    const long long n = detail::parse_int(required("n_samples"));
    if (n <= 0) throw FormatError(sidecar_path(path) + ": n_samples must be positive");
    std::string label;
    if (auto it = meta.find("label"); it != meta.end()) label = it->second;
    std::size_t warmup = 0;
    if (auto it = meta.find("warmup"); it != meta.end())
        warmup = static_cast<std::size_t>(detail::parse_int(it->second));

    IqFormat format = format_for_path(path);
    if (auto it = meta.find("format"); it != meta.end()) {
        if (it->second == "csv")
            format = IqFormat::Csv;
        else if (it->second == "bin")
            format = IqFormat::Binary;
        else
            throw FormatError(sidecar_path(path) + ": unknown format '" + it->second + "'");
    }

    const std::string payload = detail::read_text_file(path);
    ComplexVector samples;
    samples.reserve(static_cast<std::size_t>(n));
    if (format == IqFormat::Binary) {
        if (payload.size() != static_cast<std::size_t>(n) * 16)
            throw FormatError(path + ": payload holds " + std::to_string(payload.size()) +
                              " bytes, sidecar announces " + std::to_string(n) + " samples");
        const auto* bytes = reinterpret_cast<const unsigned char*>(payload.data());
        for (long long i = 0; i < n; ++i)
            samples.emplace_back(get_le64(bytes + 16 * i), get_le64(bytes + 16 * i + 8));
    } else {
        std::istringstream in(payload);
        std::string line;
        if (!std::getline(in, line) || detail::trim(line) != "i,q")
            throw FormatError(path + ": CSV header must be 'i,q'");
        while (std::getline(in, line)) {
            if (detail::trim(line).empty()) continue;
            samples.push_back(detail::parse_complex(line));
        }
        if (samples.size() != static_cast<std::size_t>(n))
            throw FormatError(path + ": CSV holds " + std::to_string(samples.size()) +
                              " rows, sidecar announces " + std::to_string(n));
    }
    try {
        return ComplexSignal(std::move(samples), rate, bandwidth, label, warmup);
    } catch (const ParameterError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

}  // namespace kernelpa
