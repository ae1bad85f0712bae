#include "ayo/game.hpp"

#include <algorithm>

namespace ayo {

void GameConfig::validate() const {
  if (seeds_per_pit < 1 || seeds_per_pit > 21)
    throw std::invalid_argument("seeds_per_pit must be in [1, 21]");
  if (repetition_limit < 1)
    throw std::invalid_argument("repetition_limit must be >= 1");
  if (max_plies < 1) throw std::invalid_argument("max_plies must be >= 1");
}

std::uint64_t GameConfig::digest() const {
  // FNV-1a over the rule fields.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(seeds_per_pit));
  mix(static_cast<std::uint64_t>(stalemate_rule));
  mix(static_cast<std::uint64_t>(grand_slam_rule));
  mix(static_cast<std::uint64_t>(repetition_limit));
  mix(static_cast<std::uint64_t>(max_plies));
  return h;
}

GameState new_game(const GameConfig& config) {
  config.validate();
  GameState s;
  s.board.pits.fill(static_cast<std::uint8_t>(config.seeds_per_pit));
  s.history.push_back(s.key());
  return s;
}

GameState make_state(const Board& board, Side to_move, int captured_south,
                     int captured_north) {
  GameState s;
  s.board = board;
  s.to_move = to_move;
  s.captured_south = captured_south;
  s.captured_north = captured_north;
  s.history.push_back(s.key());
  return s;
}

namespace {

struct SowResult {
  Board board;
  int landing = 0;
  int captured = 0;
};

// Sowing and the 2-3 capture chain, grand slam forfeited. Does not touch
// stores, side to move or history.
SowResult sow_and_capture(const Board& in, int pit, Side mover) {
  SowResult r;
  r.board = in;
  int n = r.board.pits[pit];
  r.board.pits[pit] = 0;
  int idx = pit;
  while (n > 0) {
    idx = (idx + 1) % 12;
    if (idx == pit) continue;  // origin skipped on every lap
    ++r.board.pits[idx];
    --n;
  }
  r.landing = idx;

  int opp_base = mover == Side::South ? 6 : 0;
  if (r.landing >= opp_base && r.landing < opp_base + 6 &&
      (r.board.pits[r.landing] == 2 || r.board.pits[r.landing] == 3)) {
    int first = r.landing;
    while (first - 1 >= opp_base &&
           (r.board.pits[first - 1] == 2 || r.board.pits[first - 1] == 3)) {
      --first;
    }
    int take = 0;
    for (int i = first; i <= r.landing; ++i) take += r.board.pits[i];
    int opp_total = 0;
    for (int i = opp_base; i < opp_base + 6; ++i) opp_total += r.board.pits[i];
    if (take < opp_total) {
      for (int i = first; i <= r.landing; ++i) r.board.pits[i] = 0;
      r.captured = take;
    }
    // take == opp_total: grand slam, capture forfeited, seeds remain
  }
  return r;
}

}  // namespace

std::vector<Move> legal_moves(const GameState& state) {
  std::vector<Move> moves;
  int own_base = state.to_move == Side::South ? 0 : 6;
  bool opp_empty = state.board.row_sum(opponent_of(state.to_move)) == 0;
  for (int i = own_base; i < own_base + 6; ++i) {
    if (state.board.pits[i] == 0) continue;
    if (opp_empty) {
      // golden rule: the move must leave the opponent a move
      SowResult r = sow_and_capture(state.board, i, state.to_move);
      int opp_base = state.to_move == Side::South ? 6 : 0;
      int opp = 0;
      for (int j = opp_base; j < opp_base + 6; ++j) opp += r.board.pits[j];
      if (opp == 0) continue;
    }
    moves.push_back(Move{i});
  }
  return moves;
}

MoveOutcome apply_move(const GameState& state, Move move,
                       const GameConfig& config) {
  int own_base = state.to_move == Side::South ? 0 : 6;
  if (move.pit < own_base || move.pit >= own_base + 6)
    throw std::invalid_argument("illegal move: pit is not on your row");
  if (state.board.pits[move.pit] == 0)
    throw std::invalid_argument("illegal move: pit is empty");

  SowResult r = sow_and_capture(state.board, move.pit, state.to_move);
  if (r.board.row_sum(opponent_of(state.to_move)) == 0)
    throw std::invalid_argument(
        "illegal move: golden rule, the opponent must be left a move");
  (void)config;

  MoveOutcome out;
  out.captured_now = r.captured;
  out.landing_pit = r.landing;
  out.next = state;
  out.next.board = r.board;
  if (state.to_move == Side::South)
    out.next.captured_south += r.captured;
  else
    out.next.captured_north += r.captured;
  out.next.to_move = opponent_of(state.to_move);
  out.next.ply = state.ply + 1;
  out.next.history.push_back(out.next.key());
  return out;
}

GameStatus status(const GameState& state, const GameConfig& config) {
  GameStatus st;
  int total = state.total_seeds();
  st.final_south = state.captured_south;
  st.final_north = state.captured_north;

  if (2 * state.captured_south > total) {
    st.kind = StatusKind::WinSouth;
    st.winner = Side::South;
    return st;
  }
  if (2 * state.captured_north > total) {
    st.kind = StatusKind::WinNorth;
    st.winner = Side::North;
    return st;
  }
  if (state.captured_south == state.captured_north &&
      2 * state.captured_south == total) {
    st.kind = StatusKind::Draw;
    return st;
  }

  int repeats = 0;
  PositionKey cur = state.key();
  for (const auto& k : state.history)
    if (k == cur) ++repeats;
  if (repeats > config.repetition_limit || state.ply >= config.max_plies) {
    st.kind = StatusKind::SplitByRows;
    st.final_south = state.captured_south + state.board.row_sum(Side::South);
    st.final_north = state.captured_north + state.board.row_sum(Side::North);
    if (st.final_south > st.final_north)
      st.winner = Side::South;
    else if (st.final_north > st.final_south)
      st.winner = Side::North;
    return st;
  }

  if (legal_moves(state).empty()) {
    if (config.stalemate_rule == StalemateRule::Cancelled) {
      st.kind = StatusKind::StalemateCancelled;
    } else {
      st.kind = StatusKind::StalemateMoverLoses;
      // the stuck mover forfeits the board seeds
      if (state.to_move == Side::South)
        st.final_north += state.board.total();
      else
        st.final_south += state.board.total();
      st.winner = opponent_of(state.to_move);
    }
    return st;
  }

  st.kind = StatusKind::Ongoing;
  return st;
}

}  // namespace ayo
