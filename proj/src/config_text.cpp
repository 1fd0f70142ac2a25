#include "mempoolsim/config_text.hpp"

#include "mempoolsim/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace mempoolsim {

namespace {

[[noreturn]] void type_error(const ConfigValue& v, std::string_view key, const char* expected) {
    throw ParseError(v.line, std::string(key) + " must be " + expected);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

// Drops a trailing comment while respecting quoted strings.
std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_string && c == '\\') {
            ++i;
        } else if (c == '"') {
            in_string = !in_string;
        } else if (c == '#' && !in_string) {
            return line.substr(0, i);
        }
    }
    return line;
}

class ValueParser {
public:
    ValueParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    ConfigValue parse_all() {
        ConfigValue v = parse_value();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing characters");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

    void skip_space() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    ConfigValue parse_value() {
        skip_space();
        if (pos_ >= text_.size()) fail("missing value");
        const char c = text_[pos_];
        if (c == '"') return make(parse_string());
        if (c == '[') return parse_array();
        return parse_scalar();
    }

    ConfigValue make(auto value) const {
        ConfigValue v;
        v.data = std::move(value);
        v.line = line_;
        return v;
    }

    std::string parse_string() {
        ++pos_;
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            char c = text_[pos_++];
            if (c == '\\') {
                if (pos_ >= text_.size()) fail("unterminated escape");
                const char e = text_[pos_++];
                switch (e) {
                case 'n': c = '\n'; break;
                case 't': c = '\t'; break;
                case '"': c = '"'; break;
                case '\\': c = '\\'; break;
                default: fail(std::string("unsupported escape \\") + e);
                }
            }
            out.push_back(c);
        }
        if (pos_ >= text_.size()) fail("unterminated string");
        ++pos_;
        return out;
    }

    ConfigValue parse_array() {
        ++pos_;
        ConfigValue::Array items;
        while (true) {
            skip_space();
            if (pos_ >= text_.size()) fail("unterminated array");
            if (text_[pos_] == ']') {
                ++pos_;
                break;
            }
            ConfigValue item = parse_value();
            if (std::holds_alternative<ConfigValue::Array>(item.data)) fail("nested arrays are not supported");
            items.push_back(std::move(item));
            skip_space();
            if (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
            } else if (pos_ < text_.size() && text_[pos_] != ']') {
                fail("expected ',' or ']' in array");
            }
        }
        return make(std::move(items));
    }

    ConfigValue parse_scalar() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
               text_[pos_] != ' ' && text_[pos_] != '\t' && text_[pos_] != '\n')
            ++pos_;
        const std::string_view token = text_.substr(start, pos_ - start);
        if (token == "true") return make(true);
        if (token == "false") return make(false);

        std::string digits;
        for (char c : token)
            if (c != '_') digits.push_back(c);
        if (digits.empty()) fail("missing value");
        const bool is_float = digits.find_first_of(".eE") != std::string::npos ||
                              digits == "inf" || digits == "+inf" || digits == "-inf";
        const char* first = digits.data() + (digits[0] == '+' ? 1 : 0);
        const char* last = digits.data() + digits.size();
        if (is_float) {
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || ptr != last) fail("invalid number '" + std::string(token) + "'");
            return make(value);
        }
        std::int64_t value = 0;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec == std::errc::result_out_of_range && *first != '-') {
            std::uint64_t big = 0;
            const auto [uptr, uec] = std::from_chars(first, last, big);
            if (uec == std::errc() && uptr == last) return make(big);
        }
        if (ec != std::errc() || ptr != last) fail("invalid value '" + std::string(token) + "'");
        return make(value);
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

int bracket_balance(std::string_view s) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (in_string && s[i] == '\\') {
            ++i;
            continue;
        }
        if (s[i] == '"') in_string = !in_string;
        if (in_string) continue;
        if (s[i] == '[') ++depth;
        if (s[i] == ']') --depth;
    }
    return depth;
}

}  // namespace

double ConfigValue::as_double(std::string_view key) const {
    if (const auto* d = std::get_if<double>(&data)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&data)) return static_cast<double>(*i);
    if (const auto* u = std::get_if<std::uint64_t>(&data)) return static_cast<double>(*u);
    type_error(*this, key, "a number");
}

std::int64_t ConfigValue::as_int(std::string_view key) const {
    if (const auto* i = std::get_if<std::int64_t>(&data)) return *i;
    if (const auto* d = std::get_if<double>(&data); d && std::floor(*d) == *d && std::abs(*d) < 9e15)
        return static_cast<std::int64_t>(*d);
    type_error(*this, key, "an integer");
}

std::uint64_t ConfigValue::as_uint(std::string_view key) const {
    if (const auto* u = std::get_if<std::uint64_t>(&data)) return *u;
    const std::int64_t v = as_int(key);
    if (v < 0) type_error(*this, key, "a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

bool ConfigValue::as_bool(std::string_view key) const {
    if (const auto* b = std::get_if<bool>(&data)) return *b;
    type_error(*this, key, "true or false");
}

const std::string& ConfigValue::as_string(std::string_view key) const {
    if (const auto* s = std::get_if<std::string>(&data)) return *s;
    type_error(*this, key, "a string");
}

const ConfigValue::Array& ConfigValue::as_array(std::string_view key) const {
    if (const auto* a = std::get_if<Array>(&data)) return *a;
    type_error(*this, key, "an array");
}

ConfigDocument parse_config_text(std::string_view text) {
    ConfigDocument doc;
    doc.tables[""];
    std::string current;

    std::vector<std::string_view> lines;
    for (std::size_t start = 0; start <= text.size();) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const std::string_view line = trim(strip_comment(lines[i]));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "malformed table header");
            const std::string_view name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw ParseError(line_no, "empty table name");
            for (char c : name)
                if (!is_bare_key_char(c) && c != '.')
                    throw ParseError(line_no, "invalid table name '" + std::string(name) + "'");
            current = std::string(name);
            if (doc.table_lines.contains(current))
                throw ParseError(line_no, "duplicate table [" + current + "]");
            doc.table_lines[current] = line_no;
            doc.tables[current];
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ParseError(line_no, "missing key");
        for (char c : key)
            if (!is_bare_key_char(c)) throw ParseError(line_no, "invalid key '" + key + "'");

        std::string value_text(trim(line.substr(eq + 1)));
        while (bracket_balance(value_text) > 0) {
            if (++i >= lines.size()) throw ParseError(line_no, "unterminated array");
            value_text += '\n';
            value_text += trim(strip_comment(lines[i]));
        }
        ConfigValue value = ValueParser(value_text, line_no).parse_all();

        auto [it, inserted] = doc.tables[current].emplace(key, std::move(value));
        if (!inserted) throw ParseError(line_no, "duplicate key '" + key + "'");
    }
    return doc;
}

std::string format_exact(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    std::string out(buf, ptr);
    if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
    return out;
}

std::string quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out.push_back(c);
        }
    }
    out += '"';
    return out;
}

}  // namespace mempoolsim
