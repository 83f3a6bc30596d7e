#include "kernelpa/error.hpp"

#include <utility>

namespace kernelpa {

DegeneracyError::DegeneracyError(const std::string& what, std::vector<std::size_t> dependent)
    : Error(what), dependent_(std::move(dependent)) {}

}  // namespace kernelpa
