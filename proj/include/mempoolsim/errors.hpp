#pragma once

#include <stdexcept>
#include <string>

namespace mempoolsim {

/// A configuration value violates its invariant. `field()` names the key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed input data (config text, trace rows, matrix fixtures).
/// `line()` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Filesystem failure (unreadable input, unwritable output directory).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Broken internal invariant, e.g. removing a transaction that is not pending.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace mempoolsim
