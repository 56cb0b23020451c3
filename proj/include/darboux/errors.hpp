#pragma once

#include <stdexcept>
#include <string>

namespace darboux {

// Numeric failure tagged with the module that raised it. The CLI maps these
// to exit code 3 and prints the module name.
class NumericError : public std::runtime_error {
public:
    NumericError(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// Work budget exceeded (e.g. nested coefficient sums).
class ResourceError : public NumericError {
public:
    using NumericError::NumericError;
};

// Recursion lost too many digits against its residual check.
class InstabilityError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace darboux
