#pragma once

#include <stdexcept>
#include <string>

namespace e2c {

/// Malformed input text (CSV cells, seconds, generator specs).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent configuration: incompatible scenario, unknown policy,
/// mode mismatch, duplicate registration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// API misuse: out-of-range index, stepping a finished simulation.
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace e2c
