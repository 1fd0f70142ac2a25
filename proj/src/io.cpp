#include "mempoolsim/io.hpp"

#include "mempoolsim/config_text.hpp"
#include "mempoolsim/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace mempoolsim {

namespace fs = std::filesystem;

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw IoError("short write to " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot rename into " + path.string() + ": " + ec.message());
    }
}

void ensure_writable_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory " + dir.string());
    const fs::path probe = dir / (".write_probe." + std::to_string(::getpid()));
    {
        std::ofstream out(probe, std::ios::binary);
        if (!out) throw IoError("output directory is not writable: " + dir.string());
    }
    fs::remove(probe, ec);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::vector<std::string> fields;
        std::size_t field_start = 0;
        while (true) {
            const std::size_t comma = line.find(',', field_start);
            if (comma == std::string_view::npos) {
                fields.emplace_back(line.substr(field_start));
                break;
            }
            fields.emplace_back(line.substr(field_start, comma - field_start));
            field_start = comma + 1;
        }
        rows.push_back(std::move(fields));
        start = end + 1;
    }
    return rows;
}

namespace {

template <class T>
bool parse_field(const std::string& text, T& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

TraceArrivals parse_trace(std::string_view text) {
    const auto rows = parse_csv(text);
    if (rows.empty()) throw ParseError(1, "trace is empty");
    std::string header;
    for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
    if (header != kTraceHeader)
        throw ParseError(1, "trace header must be '" + std::string(kTraceHeader) + "'");

    TraceArrivals trace;
    trace.rows.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& fields = rows[r];
        const std::string where = "trace row " + std::to_string(r) + ": ";
        if (fields.size() != 3) throw ParseError(r + 1, where + "expected 3 fields");
        TraceRow row;
        std::uint64_t size = 0;
        if (!parse_field(fields[0], row.arrival_time))
            throw ParseError(r + 1, where + "bad arrival_time_s '" + fields[0] + "'");
        if (!parse_field(fields[1], row.fee))
            throw ParseError(r + 1, where + "bad fee_satoshi '" + fields[1] + "'");
        if (!parse_field(fields[2], size) || size > UINT32_MAX)
            throw ParseError(r + 1, where + "bad size_bytes '" + fields[2] + "'");
        row.size = static_cast<std::uint32_t>(size);
        const std::string problem =
            trace_row_problem(trace.rows.empty() ? nullptr : &trace.rows.back(), row);
        if (!problem.empty()) throw ParseError(r + 1, where + problem);
        trace.rows.push_back(row);
    }
    if (trace.rows.empty()) throw ParseError(1, "trace has no data rows");
    return trace;
}

TraceArrivals load_trace(const fs::path& path) {
    return parse_trace(read_file(path));
}

std::string format_trace(const TraceArrivals& trace) {
    std::string out(kTraceHeader);
    out += '\n';
    for (const TraceRow& row : trace.rows) {
        out += format_exact(row.arrival_time);
        out += ',';
        out += std::to_string(row.fee);
        out += ',';
        out += std::to_string(row.size);
        out += '\n';
    }
    return out;
}

TraceArrivals trace_from_result(const SimResult& result) {
    TraceArrivals trace;
    trace.rows.reserve(result.transactions.size());
    for (const Transaction& tx : result.transactions)
        trace.rows.push_back({tx.arrival_time, tx.fee, tx.size});
    return trace;
}

PayoffMatrix parse_payoff_matrix(std::string_view text) {
    const auto rows = parse_csv(text);
    if (rows.empty()) throw ParseError(1, "payoff matrix is empty");
    const auto& header = rows[0];
    if (header.size() < 3 || header.size() % 2 != 1 || header[0] != "p1_strategy")
        throw ParseError(1, "header must be p1_strategy followed by <s>_p1,<s>_p2 pairs");
    const std::size_t n = (header.size() - 1) / 2;

    PayoffMatrix matrix;
    for (std::size_t c = 0; c < n; ++c) {
        const std::string& a = header[1 + 2 * c];
        const std::string& b = header[2 + 2 * c];
        if (a.size() < 4 || a.substr(a.size() - 3) != "_p1" || b.size() < 4 ||
            b.substr(b.size() - 3) != "_p2" || a.substr(0, a.size() - 3) != b.substr(0, b.size() - 3))
            throw ParseError(1, "column pair " + std::to_string(c + 1) + " must be <s>_p1,<s>_p2");
        matrix.strategies.push_back(a.substr(0, a.size() - 3));
    }
    if (rows.size() != n + 1)
        throw ParseError(rows.size() + 1, "expected " + std::to_string(n) + " strategy rows");

    matrix.cells.resize(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& fields = rows[r + 1];
        if (fields.size() != header.size()) throw ParseError(r + 2, "wrong number of fields");
        if (fields[0] != matrix.strategies[r])
            throw ParseError(r + 2, "row strategy '" + fields[0] + "' does not match column order");
        for (std::size_t c = 0; c < n; ++c) {
            PayoffCell& cell = matrix.at(r, c);
            if (!parse_field(fields[1 + 2 * c], cell.p1) || !parse_field(fields[2 + 2 * c], cell.p2))
                throw ParseError(r + 2, "bad payoff value");
        }
    }
    try {
        matrix.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(0, e.what());
    }
    return matrix;
}

PayoffMatrix load_payoff_matrix(const fs::path& path) {
    return parse_payoff_matrix(read_file(path));
}

std::string format_payoff_matrix(const PayoffMatrix& matrix) {
    std::string out = "p1_strategy";
    for (const std::string& s : matrix.strategies) out += "," + s + "_p1," + s + "_p2";
    out += '\n';
    for (std::size_t r = 0; r < matrix.size(); ++r) {
        out += matrix.strategies[r];
        for (std::size_t c = 0; c < matrix.size(); ++c)
            out += "," + format_number(matrix.at(r, c).p1) + "," + format_number(matrix.at(r, c).p2);
        out += '\n';
    }
    return out;
}

std::string format_equilibrium(const PayoffMatrix& matrix, const EquilibriumReport& report) {
    const auto name = [&](std::optional<std::size_t> i) {
        return i ? matrix.strategies[*i] : std::string("none");
    };
    std::string out = "kind,p1_strategy,p2_strategy\n";
    out += "dominant_p1," + name(report.dominant.p1) + ",\n";
    out += "dominant_p2,," + name(report.dominant.p2) + "\n";
    for (std::size_t c = 0; c < matrix.size(); ++c)
        out += "best_response_p1," + matrix.strategies[report.best_response_p1[c]] + "," +
               matrix.strategies[c] + "\n";
    for (std::size_t r = 0; r < matrix.size(); ++r)
        out += "best_response_p2," + matrix.strategies[r] + "," +
               matrix.strategies[report.best_response_p2[r]] + "\n";
    if (report.pure_nash.empty()) out += "pure_nash,none,none\n";
    for (const auto& [r, c] : report.pure_nash)
        out += "pure_nash," + matrix.strategies[r] + "," + matrix.strategies[c] + "\n";
    return out;
}

}  // namespace mempoolsim
