#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scdual {

/// Error raised by the text readers. Carries the 1-based line number of the
/// offending input line (0 when the error is not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Round-trip formatting with 17 significant digits; infinities print as
/// `inf` / `-inf`. Locale independent.
std::string format_double(double x);

/// Locale-independent parse of a full token. Accepts `inf`, `-inf`, `+inf`.
std::optional<double> parse_double(std::string_view token);

/// Splits on blanks and drops everything after a `#`.
std::vector<std::string_view> tokenize(std::string_view line);

}  // namespace scdual
