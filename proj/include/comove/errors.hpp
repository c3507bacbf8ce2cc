#pragma once

#include <stdexcept>
#include <string>

namespace comove {

/// Invalid parameters or flag combinations. CLI exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unreadable, malformed or inconsistent input data. CLI exit code 3.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate or non-finite numeric state. CLI exit code 4.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace comove
