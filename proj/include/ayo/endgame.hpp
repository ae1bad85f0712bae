#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ayo/game.hpp"

namespace ayo {

// C(n, k); throws std::overflow_error instead of wrapping.
std::uint64_t binomial(int n, int k);

// Number of 12-pit boards holding exactly n_seeds: C(n_seeds + 11, 11).
std::uint64_t count_positions(int n_seeds);

struct GodelIndex {
  int n_seeds = 0;
  std::uint64_t rank = 0;
};

// Lexicographic rank of the pit tuple among all boards of the same total.
GodelIndex godel_rank(const Board& board);
Board godel_unrank(const GodelIndex& index);

Board swap_rows(const Board& board);

// The board of `state` as seen by the player to move (own row in pits 0..5).
Board mover_relative_board(const GameState& state);

// Score of a position with no legal move, from the stuck mover's view.
int stalemate_value(int n_seeds, const GameConfig& config);

// Bit-packed 7-bit entries, one per Godel rank per seed level. Values are
// optimal future capture differentials for the player to move.
class EndgameDatabase {
 public:
  EndgameDatabase() = default;
  EndgameDatabase(int max_seeds, std::uint64_t rule_digest);

  int max_seeds() const { return max_seeds_; }
  std::uint64_t rule_digest() const { return digest_; }
  static constexpr int entry_bits = 7;
  static constexpr int sentinel = 127;  // unsolved / reserved

  std::uint64_t level_count(int level) const { return counts_.at(level); }
  int get(int level, std::uint64_t rank) const;  // throws on sentinel
  void set(int level, std::uint64_t rank, int value);

  const std::vector<std::vector<std::uint8_t>>& packed() const { return packed_; }
  std::vector<std::uint8_t>& packed_level(int level) { return packed_.at(level); }

  bool operator==(const EndgameDatabase&) const = default;

 private:
  int raw_get(int level, std::uint64_t rank) const;
  int max_seeds_ = -1;
  std::uint64_t digest_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<std::vector<std::uint8_t>> packed_;
};

struct SolveStats {
  std::vector<std::uint64_t> level_counts;
  std::uint64_t stalemate_entries = 0;
  std::uint64_t eternal_entries = 0;   // resolved by the circulation rule
  std::uint64_t unstable_entries = 0;  // no self-consistent circulation score
};

// Retrograde solve of every level 0..max_seeds. Deterministic for any worker
// count.
EndgameDatabase solve(int max_seeds, const GameConfig& config, int workers = 1,
                      SolveStats* stats = nullptr);

// Stored value from the mover's perspective. Throws when the state holds more
// seeds than the database.
int probe(const EndgameDatabase& db, const GameState& state);

// Legal move maximizing captured - probe(child); ties prefer the larger
// immediate capture, then the lowest pit index.
Move best_move_from_db(const EndgameDatabase& db, const GameState& state);

void save_db(const EndgameDatabase& db, const std::string& path);
EndgameDatabase load_db(const std::string& path);

struct VerifyMode {
  bool exhaustive = true;
  int level_cap = 4;           // exhaustive mode
  std::uint64_t samples = 0;   // sampled mode
  std::uint64_t seed = 0;

  static VerifyMode Exhaustive(int level) { return {true, level, 0, 0}; }
  static VerifyMode Sampled(std::uint64_t k, std::uint64_t seed = 0) {
    return {false, 0, k, seed};
  }
};

struct VerifyReport {
  std::uint64_t entries_checked = 0;
  std::uint64_t self_consistency_mismatches = 0;
  std::uint64_t oracle_mismatches = 0;
  std::vector<std::string> details;  // first few mismatches

  bool ok() const {
    return self_consistency_mismatches == 0 && oracle_mismatches == 0;
  }
  std::string summary() const;
};

// (a) value = max over moves of captured - child value for every checked
// entry, and (b) equality against the independent reference solver.
VerifyReport verify(const EndgameDatabase& db, const VerifyMode& mode,
                    const GameConfig& config);

}  // namespace ayo
