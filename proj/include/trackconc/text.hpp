#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace trackconc {

// Formats a double with 9 significant digits (%.9g). All floating-point
// values in CSV/JSONL outputs go through this so golden files stay stable.
std::string fmt9(double value);

// RFC 4180 style escaping: quotes the field when it contains a comma,
// quote, or newline.
std::string csv_escape(std::string_view field);

// Joins fields into one CSV row (no trailing newline).
std::string csv_row(const std::vector<std::string>& fields);

// Splits on a single character; "a..b" yields an empty middle part.
std::vector<std::string> split(std::string_view text, char sep);

std::string to_lower(std::string_view text);

// Strips ASCII whitespace from both ends.
std::string_view trim(std::string_view text);

}  // namespace trackconc
