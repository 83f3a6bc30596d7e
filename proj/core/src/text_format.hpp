#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace kernelpa::detail {

/// Shortest decimal representation that parses back to the same double.
[[nodiscard]] std::string format_double(double v);
[[nodiscard]] std::string format_complex(std::complex<double> c);  // "re,im"

[[nodiscard]] double parse_double(std::string_view s);
[[nodiscard]] long long parse_int(std::string_view s);
[[nodiscard]] std::complex<double> parse_complex(std::string_view s);  // "re,im"

[[nodiscard]] std::string_view trim(std::string_view s);
[[nodiscard]] std::vector<std::string_view> split_ws(std::string_view s);
[[nodiscard]] std::vector<std::string_view> split(std::string_view s, char sep);

/// Parses "key = value" lines; '#' starts a comment. Throws FormatError on
/// lines without '=' and on duplicate keys.
[[nodiscard]] std::map<std::string, std::string> parse_key_values(std::string_view text);

[[nodiscard]] std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace kernelpa::detail
