#include "ayo/endgame_reference.hpp"

#include <algorithm>
#include <random>

namespace ayo {

namespace {

void enumerate_boards(int pit, int remaining, Board& scratch,
                      std::vector<Board>& out) {
  if (pit == 11) {
    scratch.pits[11] = static_cast<std::uint8_t>(remaining);
    out.push_back(scratch);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    scratch.pits[pit] = static_cast<std::uint8_t>(v);
    enumerate_boards(pit + 1, remaining - v, scratch, out);
  }
}

bool board_less(const Board& a, const Board& b) { return a.pits < b.pits; }

}  // namespace

ReferenceSolver::ReferenceSolver(const GameConfig& config) : config_(config) {
  config_.validate();
}

std::size_t ReferenceSolver::index_of(const Level& lvl, const Board& b) const {
  auto it = std::lower_bound(lvl.boards.begin(), lvl.boards.end(), b, board_less);
  if (it == lvl.boards.end() || !(*it == b))
    throw std::logic_error("reference solver: board not found at its level");
  return std::size_t(it - lvl.boards.begin());
}

void ReferenceSolver::ensure_level(int n) {
  if (n < 0) throw std::invalid_argument("negative level");
  if (std::size_t(n) < levels_.size() && levels_[n].done) return;
  for (int k = 0; k < n; ++k) ensure_level(k);
  if (levels_.size() <= std::size_t(n)) levels_.resize(n + 1);
  Level& lvl = levels_[n];

  Board scratch{};
  enumerate_boards(0, n, scratch, lvl.boards);
  std::sort(lvl.boards.begin(), lvl.boards.end(), board_less);
  const std::size_t size = lvl.boards.size();
  lvl.entries.assign(size, Entry{});

  struct Node {
    int exact_best;  // best capture continuation, INT_MIN if none
    std::vector<std::size_t> quiet;
    bool fixed = false;
  };
  constexpr int kNone = INT32_MIN;
  std::vector<Node> nodes(size);
  std::vector<int> value(size, 0);

  for (std::size_t i = 0; i < size; ++i) {
    const Board& b = lvl.boards[i];
    GameState s = make_state(b, Side::South);
    auto moves = legal_moves(s);
    Node& node = nodes[i];
    node.exact_best = kNone;
    if (moves.empty()) {
      value[i] = stalemate_value(n, config_);
      node.fixed = true;
      lvl.entries[i] = {value[i], true, true};
      continue;
    }
    for (Move m : moves) {
      MoveOutcome out = apply_move(s, m, config_);
      Board child = swap_rows(out.next.board);
      if (out.captured_now > 0) {
        const Level& sub = levels_[n - out.captured_now];
        int cv = sub.entries[index_of(sub, child)].value;
        node.exact_best = std::max(node.exact_best, out.captured_now - cv);
      } else {
        node.quiet.push_back(index_of(lvl, child));
      }
    }
    if (node.quiet.empty()) {
      value[i] = node.exact_best;
      node.fixed = true;
      lvl.entries[i] = {value[i], true, true};
    }
  }

  std::vector<int> L(size), U(size), Ln(size), Un(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (nodes[i].fixed) {
      L[i] = U[i] = value[i];
    } else {
      L[i] = nodes[i].exact_best == kNone ? -n
                                          : std::max(nodes[i].exact_best, -n);
      U[i] = n;
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < size; ++i) {
      if (nodes[i].fixed) {
        Ln[i] = L[i];
        Un[i] = U[i];
        continue;
      }
      int nl = nodes[i].exact_best;
      int nu = nl;
      for (std::size_t c : nodes[i].quiet) {
        nl = std::max(nl, -U[c]);
        nu = std::max(nu, -L[c]);
      }
      Ln[i] = std::max(nl, L[i]);
      Un[i] = std::min(nu, U[i]);
      if (Ln[i] != L[i] || Un[i] != U[i]) changed = true;
    }
    L.swap(Ln);
    U.swap(Un);
  }

  std::vector<std::size_t> residual;
  for (std::size_t i = 0; i < size; ++i) {
    if (nodes[i].fixed) continue;
    if (L[i] == U[i]) {
      value[i] = L[i];
      lvl.entries[i] = {value[i], true, true};
    } else {
      residual.push_back(i);
    }
  }

  if (!residual.empty()) {
    // Pure circulation nodes: endless play scores 0, so the value is the
    // largest threshold t either side can force. Each threshold is decided
    // by iterating the two coupled win predicates to their least fixpoint
    // (a claimant node wins by exiting at >= t or by handing the opponent a
    // lost node; a defender node loses when it cannot exit at >= 1-t and all
    // of its circulation moves hand the claimant a win).
    std::vector<int> exit_best(size, INT32_MIN);
    std::vector<std::vector<std::size_t>> loops(size);
    std::vector<char> is_residual(size, 0);
    for (std::size_t i : residual) is_residual[i] = 1;
    for (std::size_t i : residual) {
      exit_best[i] = nodes[i].exact_best;
      for (std::size_t c : nodes[i].quiet) {
        if (is_residual[c])
          loops[i].push_back(c);
        else
          exit_best[i] = std::max(exit_best[i], -value[c]);
      }
    }

    std::vector<char> decided(size, 0);
    std::vector<char> wa(size), wb(size);
    for (int t = n; t >= 1; --t) {
      for (std::size_t i : residual) {
        wa[i] = exit_best[i] != INT32_MIN && exit_best[i] >= t;
        wb[i] = 0;
      }
      for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t i : residual) {
          if (!wb[i] &&
              !(exit_best[i] != INT32_MIN && exit_best[i] >= 1 - t)) {
            bool all = true;
            for (std::size_t c : loops[i]) all = all && wa[c];
            if (all) {
              wb[i] = 1;
              grew = true;
            }
          }
          if (!wa[i]) {
            for (std::size_t c : loops[i])
              if (wb[c]) {
                wa[i] = 1;
                grew = true;
                break;
              }
          }
        }
      }
      for (std::size_t i : residual) {
        if (decided[i]) continue;
        if (wa[i]) {
          value[i] = t;
          decided[i] = 1;
        } else if (wb[i]) {
          value[i] = -t;
          decided[i] = 1;
        }
      }
    }
    for (std::size_t i : residual)
      if (!decided[i]) value[i] = 0;
    for (std::size_t i : residual) {
      int backed = nodes[i].exact_best;
      for (std::size_t c : nodes[i].quiet) backed = std::max(backed, -value[c]);
      lvl.entries[i] = {value[i], false, backed == value[i]};
    }
  }

  lvl.done = true;
}

const std::vector<Board>& ReferenceSolver::boards(int n_seeds) {
  ensure_level(n_seeds);
  return levels_[n_seeds].boards;
}

ReferenceSolver::Entry ReferenceSolver::lookup(const Board& board) {
  int n = board.total();
  ensure_level(n);
  const Level& lvl = levels_[n];
  return lvl.entries[index_of(lvl, board)];
}

VerifyReport verify(const EndgameDatabase& db, const VerifyMode& mode,
                    const GameConfig& config) {
  config.validate();
  if (config.digest() != db.rule_digest())
    throw std::invalid_argument(
        "rule config digest does not match the database");

  ReferenceSolver ref(config);
  VerifyReport report;
  auto note = [&report](const std::string& msg) {
    if (report.details.size() < 10) report.details.push_back(msg);
  };

  auto check_entry = [&](int level, std::uint64_t rank) {
    ++report.entries_checked;
    Board b = godel_unrank({level, rank});
    int dbv = db.get(level, rank);

    auto refe = ref.lookup(b);
    if (refe.value != dbv) {
      ++report.oracle_mismatches;
      note("level " + std::to_string(level) + " rank " + std::to_string(rank) +
           ": db=" + std::to_string(dbv) +
           " oracle=" + std::to_string(refe.value));
    }

    GameState s = make_state(b, Side::South);
    auto moves = legal_moves(s);
    bool consistent;
    if (moves.empty()) {
      consistent = dbv == stalemate_value(level, config);
    } else {
      int backed = INT32_MIN;
      for (Move m : moves) {
        MoveOutcome out = apply_move(s, m, config);
        backed = std::max(backed, out.captured_now - probe(db, out.next));
      }
      consistent = dbv == backed;
    }
    if (!consistent) {
      ++report.self_consistency_mismatches;
      note("level " + std::to_string(level) + " rank " + std::to_string(rank) +
           ": db=" + std::to_string(dbv) + " fails the negamax equation");
    }
  };

  if (mode.exhaustive) {
    int top = std::min(mode.level_cap, db.max_seeds());
    for (int n = 0; n <= top; ++n)
      for (std::uint64_t r = 0; r < db.level_count(n); ++r) check_entry(n, r);
  } else {
    std::uint64_t total = 0;
    for (int n = 0; n <= db.max_seeds(); ++n) total += db.level_count(n);
    std::mt19937_64 rng(mode.seed);
    for (std::uint64_t i = 0; i < mode.samples; ++i) {
      std::uint64_t g = rng() % total;
      int n = 0;
      while (g >= db.level_count(n)) {
        g -= db.level_count(n);
        ++n;
      }
      check_entry(n, g);
    }
  }
  return report;
}

}  // namespace ayo
