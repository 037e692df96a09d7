#pragma once

#include <stdexcept>
#include <string>

namespace survtest {

/// Raised when a statistic cannot be standardized: zero null variance,
/// zero expected count, or no events in the pooled sample.
class DegenerateError : public std::runtime_error {
public:
    enum class Kind { variance, expectation, no_events };

    DegenerateError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace survtest
