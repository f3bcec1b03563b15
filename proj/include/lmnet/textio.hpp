#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lmnet {

/// %.17g — round-trip exact for 64-bit floats.
std::string format_double(double v);

/// Whole-token parse; rejects empty tokens and trailing garbage. Accepts
/// inf/nan spellings, so callers needing finite values must check.
std::optional<double> parse_double(const std::string& token);

std::string trim(const std::string& s);

/// Comma split with surrounding whitespace stripped from each field.
/// No quoting; an empty string yields one empty field.
std::vector<std::string> split_csv_line(const std::string& line);

/// Drops a trailing '\r' (CRLF input).
std::string strip_cr(std::string line);

}  // namespace lmnet
