#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kernelpa {

/// Base of every exception thrown by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual std::string_view kind() const noexcept { return "error"; }
};

#define KERNELPA_DEFINE_ERROR(Name, Tag)                                          \
    class Name : public Error {                                                   \
    public:                                                                       \
        using Error::Error;                                                       \
        [[nodiscard]] std::string_view kind() const noexcept override { return Tag; } \
    }

/// Invalid arguments or dimensions.
KERNELPA_DEFINE_ERROR(ParameterError, "parameter");
/// A metric is undefined for the given data (e.g. all-zero reference).
KERNELPA_DEFINE_ERROR(MetricError, "undefined-metric");
KERNELPA_DEFINE_ERROR(AlignmentError, "alignment-failure");
KERNELPA_DEFINE_ERROR(ReconstructionError, "reconstruction-failure");
KERNELPA_DEFINE_ERROR(EstimationError, "estimation-failure");
KERNELPA_DEFINE_ERROR(EvaluationError, "evaluation");
KERNELPA_DEFINE_ERROR(UnsupportedSubstitutionError, "unsupported-substitution");
/// Malformed or inconsistent file contents.
KERNELPA_DEFINE_ERROR(FormatError, "format");
KERNELPA_DEFINE_ERROR(IoError, "io");

#undef KERNELPA_DEFINE_ERROR

/// Rank-deficient least-squares design. Carries the indices of the columns
/// that were found linearly dependent on the others.
class DegeneracyError : public Error {
public:
    DegeneracyError(const std::string& what, std::vector<std::size_t> dependent);
    [[nodiscard]] std::string_view kind() const noexcept override { return "degeneracy"; }
    [[nodiscard]] const std::vector<std::size_t>& dependent() const noexcept { return dependent_; }

private:
    std::vector<std::size_t> dependent_;
};

}  // namespace kernelpa
