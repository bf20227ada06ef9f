#pragma once

#include <stdexcept>
#include <string>

namespace sheetlab {

// Raised when a numerical routine cannot reach its requested accuracy.
// operation() names the routine so callers (and the CLI) can report it.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string operation, const std::string& message)
        : std::runtime_error(operation + ": " + message), operation_(std::move(operation)) {}

    const std::string& operation() const noexcept { return operation_; }

private:
    std::string operation_;
};

// Series truncation could not meet the tolerance; carries the best bound reached.
class SeriesRangeError : public std::range_error {
public:
    SeriesRangeError(const std::string& message, double attained_bound)
        : std::range_error(message), attained_bound_(attained_bound) {}

    double attained_bound() const noexcept { return attained_bound_; }

private:
    double attained_bound_;
};

}  // namespace sheetlab
