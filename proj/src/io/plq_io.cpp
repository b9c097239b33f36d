#include <charconv>
#include <stdexcept>

#include "lines.hpp"
#include "scdual/io/formats.hpp"

namespace scdual {

namespace io_detail {

LineReader::LineReader(std::string_view text) {
  std::size_t number = 0;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    const std::string_view line = text.substr(0, end);
    ++number;
    auto tokens = tokenize(line);
    if (!tokens.empty()) lines_.push_back({number, std::move(tokens)});
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
}

double number(const Line& line, std::size_t i) {
  if (i >= line.tokens.size()) throw ParseError(line.number, "missing field " + std::to_string(i + 1));
  const auto v = parse_double(line.tokens[i]);
  if (!v) throw ParseError(line.number, "not a number: '" + std::string(line.tokens[i]) + "'");
  return *v;
}

std::size_t index(const Line& line, std::size_t i) {
  if (i >= line.tokens.size()) throw ParseError(line.number, "missing field " + std::to_string(i + 1));
  const std::string_view t = line.tokens[i];
  std::size_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ParseError(line.number, "not an index: '" + std::string(t) + "'");
  }
  return v;
}

bool starts_with_number(const Line& line) {
  const std::string_view t = line.tokens.front();
  return t != "inf" && t != "+inf" && parse_double(t).has_value();
}

PLQFunction read_plq_block(LineReader& reader, const Line& header) {
  if (header.tokens.size() != 3) throw ParseError(header.number, "expected 'plq <lo> <hi>'");
  const double lo = number(header, 1);
  const double hi = number(header, 2);
  std::vector<PLQFunction::Piece> pieces;
  std::vector<std::size_t> lines;
  while (!reader.done() && starts_with_number(reader.peek())) {
    const Line& l = reader.next();
    if (l.tokens.size() != 4) throw ParseError(l.number, "expected '<left_end> <a> <b> <c>'");
    pieces.push_back({number(l, 0), {number(l, 1), number(l, 2), number(l, 3)}});
    lines.push_back(l.number);
  }
  try {
    return PLQFunction::from_pieces(lo, hi, pieces);
  } catch (const std::invalid_argument& e) {
    if (pieces.empty()) throw ParseError(header.number, e.what());
    // Blame the first piece whose prefix no longer describes a valid function.
    for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
      try {
        const std::vector<PLQFunction::Piece> prefix(pieces.begin(), pieces.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        PLQFunction::from_pieces(lo, pieces[k + 1].left, prefix);
      } catch (const std::invalid_argument&) {
        throw ParseError(lines[k], e.what());
      }
    }
    throw ParseError(lines.back(), e.what());
  }
}

}  // namespace io_detail

std::string format_plq(const PLQFunction& f) {
  if (!f.proper()) throw std::invalid_argument("format_plq: improper function");
  std::string out = "plq " + format_double(f.lo()) + " " + format_double(f.hi()) + "\n";
  for (const auto& p : f.pieces()) {
    out += format_double(p.left) + " " + format_double(p.q.a) + " " + format_double(p.q.b) + " " +
           format_double(p.q.c) + "\n";
  }
  return out;
}

PLQFunction parse_plq(std::string_view text) {
  io_detail::LineReader reader(text);
  if (reader.done()) throw ParseError(1, "empty input, expected 'plq <lo> <hi>'");
  const io_detail::Line& header = reader.next();
  if (header.tokens.front() != "plq") throw ParseError(header.number, "expected 'plq <lo> <hi>'");
  PLQFunction f = io_detail::read_plq_block(reader, header);
  if (!reader.done()) throw ParseError(reader.peek().number, "unexpected content after the PLQ block");
  return f;
}

}  // namespace scdual
