#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "scdual/convex/plq.hpp"
#include "scdual/util/text.hpp"

namespace scdual::io_detail {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

/// Non-empty, comment-stripped lines of a text with their 1-based numbers.
class LineReader {
 public:
  explicit LineReader(std::string_view text);

  bool done() const { return pos_ >= lines_.size(); }
  const Line& peek() const { return lines_[pos_]; }
  const Line& next() { return lines_[pos_++]; }
  /// Line number to blame when input ends early.
  std::size_t last_line() const { return lines_.empty() ? 0 : lines_.back().number; }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

double number(const Line& line, std::size_t i);
std::size_t index(const Line& line, std::size_t i);
bool starts_with_number(const Line& line);

/// Reads the header line already consumed as `header` and the piece lines
/// that follow it.
PLQFunction read_plq_block(LineReader& reader, const Line& header);

}  // namespace scdual::io_detail
