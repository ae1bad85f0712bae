#include "ayo/notation.hpp"

#include <cctype>
#include <sstream>

namespace ayo {

std::string format_state(const GameState& state) {
  std::ostringstream out;
  for (int i = 0; i < 6; ++i) {
    if (i) out << ',';
    out << int(state.board.pits[i]);
  }
  out << '/';
  for (int i = 6; i < 12; ++i) {
    if (i > 6) out << ',';
    out << int(state.board.pits[i]);
  }
  out << ' ' << (state.to_move == Side::South ? 'S' : 'N') << ' '
      << state.captured_south << ' ' << state.captured_north;
  return out.str();
}

namespace {

int parse_count(const std::string& text, size_t& pos) {
  if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
    throw std::invalid_argument("bad state notation: expected a count at position " +
                                std::to_string(pos));
  int v = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    v = v * 10 + (text[pos] - '0');
    if (v > 100000) throw std::invalid_argument("bad state notation: count too large");
    ++pos;
  }
  return v;
}

void expect(const std::string& text, size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c)
    throw std::invalid_argument(std::string("bad state notation: expected '") + c +
                                "' at position " + std::to_string(pos));
  ++pos;
}

}  // namespace

GameState parse_state(const std::string& text, std::optional<int> expected_total) {
  size_t pos = 0;
  Board board;
  for (int i = 0; i < 12; ++i) {
    int v = parse_count(text, pos);
    if (v > 255) throw std::invalid_argument("bad state notation: pit count too large");
    board.pits[i] = static_cast<std::uint8_t>(v);
    if (i < 5 || (i >= 6 && i < 11))
      expect(text, pos, ',');
    else if (i == 5)
      expect(text, pos, '/');
  }
  expect(text, pos, ' ');
  if (pos >= text.size() || (text[pos] != 'S' && text[pos] != 'N'))
    throw std::invalid_argument("bad state notation: expected side S or N");
  Side side = text[pos] == 'S' ? Side::South : Side::North;
  ++pos;
  expect(text, pos, ' ');
  int cap_s = parse_count(text, pos);
  expect(text, pos, ' ');
  int cap_n = parse_count(text, pos);
  if (pos != text.size())
    throw std::invalid_argument("bad state notation: trailing characters");

  if (expected_total) {
    int total = board.total() + cap_s + cap_n;
    if (total != *expected_total)
      throw std::invalid_argument("seed conservation violated: state holds " +
                                  std::to_string(total) + " seeds, expected " +
                                  std::to_string(*expected_total));
  }
  return make_state(board, side, cap_s, cap_n);
}

GameState parse_state(const std::string& text, const GameConfig& config) {
  config.validate();
  return parse_state(text, 12 * config.seeds_per_pit);
}

}  // namespace ayo
