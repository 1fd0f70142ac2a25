#pragma once

#include "mempoolsim/engine.hpp"
#include "mempoolsim/game.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mempoolsim {

/// Fixed 6-significant-digit rendering used in every report CSV.
std::string format_number(double value);

/// Writes `content` to `path` via a sibling temporary file and a rename, so
/// readers never see a partial file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Creates the directory if needed and proves it is writable. Throws IoError.
void ensure_writable_dir(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);

/// Comma-separated rows, no quoting (none of the formats here need it).
/// Accepts LF or CRLF; skips a trailing empty line.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

inline constexpr std::string_view kTraceHeader = "arrival_time_s,fee_satoshi,size_bytes";

/// Parses a trace CSV; ParseError names the 1-based data row at fault
/// (header is row 0).
TraceArrivals parse_trace(std::string_view text);
TraceArrivals load_trace(const std::filesystem::path& path);

/// Trace text with shortest round-trip numbers, so a written trace reads
/// back to identical values.
std::string format_trace(const TraceArrivals& trace);

/// Arrivals of a finished run in trace form.
TraceArrivals trace_from_result(const SimResult& result);

/// Payoff matrix fixture: header `p1_strategy,<s>_p1,<s>_p2,...`, one row
/// per player-1 strategy in the same order as the column pairs.
PayoffMatrix parse_payoff_matrix(std::string_view text);
PayoffMatrix load_payoff_matrix(const std::filesystem::path& path);
std::string format_payoff_matrix(const PayoffMatrix& matrix);

/// Rows `kind,p1_strategy,p2_strategy` covering dominant strategies, best
/// responses and pure Nash cells ("none" where absent).
std::string format_equilibrium(const PayoffMatrix& matrix, const EquilibriumReport& report);

}  // namespace mempoolsim
