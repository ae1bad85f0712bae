#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ayo {

enum class Side { South, North };

inline Side opponent_of(Side s) {
  return s == Side::South ? Side::North : Side::South;
}

enum class StalemateRule { Cancelled, MoverLoses };
enum class GrandSlamRule { CaptureForfeited };

struct GameConfig {
  int seeds_per_pit = 4;
  StalemateRule stalemate_rule = StalemateRule::Cancelled;
  GrandSlamRule grand_slam_rule = GrandSlamRule::CaptureForfeited;
  int repetition_limit = 1;
  int max_plies = 10000;

  void validate() const;
  std::uint64_t digest() const;
};

// 12 pits, counter-clockwise. Pits 0..5 are South's row, 6..11 North's.
struct Board {
  std::array<std::uint8_t, 12> pits{};

  bool operator==(const Board&) const = default;

  int total() const {
    int s = 0;
    for (auto p : pits) s += p;
    return s;
  }
  int row_sum(Side side) const {
    int base = side == Side::South ? 0 : 6;
    int s = 0;
    for (int i = base; i < base + 6; ++i) s += pits[i];
    return s;
  }
};

// Row of the player to move first, minus the other row.
inline int row_split_score(const Board& b) {
  return b.row_sum(Side::South) - b.row_sum(Side::North);
}

struct PositionKey {
  Board board;
  Side to_move;
  bool operator==(const PositionKey&) const = default;
};

struct GameState {
  Board board;
  int captured_south = 0;
  int captured_north = 0;
  Side to_move = Side::South;
  int ply = 0;
  // Every (board, to_move) seen so far, including the current one.
  std::vector<PositionKey> history;

  PositionKey key() const { return PositionKey{board, to_move}; }
  int captured(Side s) const {
    return s == Side::South ? captured_south : captured_north;
  }
  int total_seeds() const {
    return board.total() + captured_south + captured_north;
  }
};

struct Move {
  int pit = 0;
  bool operator==(const Move&) const = default;
};

struct MoveOutcome {
  GameState next;
  int captured_now = 0;
  int landing_pit = 0;
};

enum class StatusKind {
  Ongoing,
  WinSouth,
  WinNorth,
  Draw,
  SplitByRows,
  StalemateCancelled,
  StalemateMoverLoses,
};

struct GameStatus {
  StatusKind kind = StatusKind::Ongoing;
  int final_south = 0;
  int final_north = 0;
  std::optional<Side> winner;  // empty for draws and ongoing games

  bool terminal() const { return kind != StatusKind::Ongoing; }
};

GameState new_game(const GameConfig& config);

std::vector<Move> legal_moves(const GameState& state);

// Throws std::invalid_argument naming the violated rule.
MoveOutcome apply_move(const GameState& state, Move move,
                       const GameConfig& config);

GameStatus status(const GameState& state, const GameConfig& config);

// Builds a bare state (no history beyond itself) on the given board.
GameState make_state(const Board& board, Side to_move, int captured_south = 0,
                     int captured_north = 0);

}  // namespace ayo
