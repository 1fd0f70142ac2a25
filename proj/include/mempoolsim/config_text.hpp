#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mempoolsim {

/// A value from a nested-table configuration file: a small TOML subset with
/// [tables], `key = value` pairs, strings, integers, floats, booleans and
/// (possibly multi-line) arrays of scalars. `#` starts a comment.
struct ConfigValue {
    using Array = std::vector<ConfigValue>;
    // Integers above INT64_MAX (64-bit seeds) are kept as uint64_t.
    std::variant<bool, std::int64_t, std::uint64_t, double, std::string, Array> data;
    std::size_t line = 0;

    double as_double(std::string_view key) const;
    std::int64_t as_int(std::string_view key) const;
    std::uint64_t as_uint(std::string_view key) const;
    bool as_bool(std::string_view key) const;
    const std::string& as_string(std::string_view key) const;
    const Array& as_array(std::string_view key) const;
};

using ConfigTable = std::map<std::string, ConfigValue>;

struct ConfigDocument {
    /// Keyed by table name; top-level keys live under "".
    std::map<std::string, ConfigTable> tables;
    std::map<std::string, std::size_t> table_lines;
};

/// Throws ParseError with the 1-based line number.
ConfigDocument parse_config_text(std::string_view text);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);

/// Quoted, escaped string literal.
std::string quote(std::string_view text);

}  // namespace mempoolsim
