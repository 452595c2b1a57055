#pragma once

// Minimal CSV reading/writing and locale-independent number handling.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agriopt {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row
};

/// Comma-separated, double-quote escaping, CRLF tolerated. Blank lines are
/// skipped. Throws std::runtime_error("line N: ...") on an unterminated quote.
CsvTable parse_csv(std::string_view text);

/// Dot-decimal parse of the whole (trimmed) field; nullopt if it is not a number.
std::optional<double> parse_number(std::string_view field);

std::string_view trim(std::string_view s);

/// Shortest general form with `digits` significant digits ("1.23457e+06").
std::string format_sig(double v, int digits = 6);

std::string csv_escape(std::string_view field);
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace agriopt
