#pragma once

#include <string>
#include <string_view>

#include "kernelpa/dpd.hpp"
#include "kernelpa/npmodel.hpp"
#include "kernelpa/parametric.hpp"

namespace kernelpa {

/// Versioned line-oriented text formats. Every double is written in its
/// shortest round-trip form, so save followed by load is value exact.
///
///   kernelpa-npmodel 1      non-parametric model
///   kernelpa-parametric 1   parametric model
///   kernelpa-dpd 1          gain line, then one of the two above
enum class ModelKind { NonParametric, Parametric, Dpd };

[[nodiscard]] std::string to_text(const NonParametricModel& m);
[[nodiscard]] std::string to_text(const ParametricModel& m);
[[nodiscard]] std::string to_text(const DpdModel& d);

[[nodiscard]] NonParametricModel npmodel_from_text(std::string_view text);
[[nodiscard]] ParametricModel parametric_from_text(std::string_view text);
[[nodiscard]] DpdModel dpd_from_text(std::string_view text);

/// Throws FormatError for an unknown header.
[[nodiscard]] ModelKind detect_model_kind(std::string_view text);

void save_model(const std::string& path, const NonParametricModel& m);
void save_model(const std::string& path, const ParametricModel& m);
void save_model(const std::string& path, const DpdModel& d);

[[nodiscard]] NonParametricModel load_npmodel(const std::string& path);
[[nodiscard]] ParametricModel load_parametric(const std::string& path);
[[nodiscard]] DpdModel load_dpd(const std::string& path);

}  // namespace kernelpa
