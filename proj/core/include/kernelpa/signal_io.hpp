#pragma once

#include <string>

#include "kernelpa/signal.hpp"

namespace kernelpa {

enum class IqFormat { Binary, Csv };

/// IQ records on disk.
///
///   binary: little-endian IEEE-754 float64, interleaved I,Q,I,Q,...
///   csv:    header "i,q", one sample per row
///
/// Both are accompanied by a UTF-8 sidecar `<path>.meta` of key=value lines:
/// sample_rate_hz, bandwidth_hz, label, n_samples, format (bin|csv) and
/// warmup when nonzero.
void write_iq(const std::string& path, const ComplexSignal& s, IqFormat format = IqFormat::Binary);

/// Reads a record written by write_iq. The payload format is taken from the
/// sidecar, or from the extension when the sidecar has no format key
/// (".csv" is CSV, anything else binary). Throws FormatError when
/// the payload disagrees with the sidecar.
[[nodiscard]] ComplexSignal read_iq(const std::string& path);

[[nodiscard]] std::string sidecar_path(const std::string& path);
[[nodiscard]] IqFormat format_for_path(const std::string& path);

}  // namespace kernelpa
