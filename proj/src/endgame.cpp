#include "ayo/endgame.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

namespace ayo {

namespace {

constexpr int kMaxBinomN = 128;

const std::uint64_t* binom_table() {
  static const auto table = [] {
    auto t = new std::uint64_t[(kMaxBinomN + 1) * (kMaxBinomN + 1)]();
    auto at = [t](int n, int k) -> std::uint64_t& {
      return t[n * (kMaxBinomN + 1) + k];
    };
    for (int n = 0; n <= kMaxBinomN; ++n) {
      at(n, 0) = 1;
      for (int k = 1; k <= n; ++k) {
        std::uint64_t a = at(n - 1, k - 1);
        std::uint64_t b = k <= n - 1 ? at(n - 1, k) : 0;
        std::uint64_t s = a + b;
        if (a == UINT64_MAX || b == UINT64_MAX || s < a)
          s = UINT64_MAX;  // overflow marker
        at(n, k) = s;
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (n > kMaxBinomN) throw std::overflow_error("binomial argument too large");
  std::uint64_t v = binom_table()[n * (kMaxBinomN + 1) + k];
  if (v == UINT64_MAX) throw std::overflow_error("binomial overflows 64 bits");
  return v;
}

std::uint64_t count_positions(int n_seeds) {
  if (n_seeds < 0) throw std::invalid_argument("negative seed count");
  return binomial(n_seeds + 11, 11);
}

GodelIndex godel_rank(const Board& board) {
  GodelIndex idx;
  idx.n_seeds = board.total();
  int rem = idx.n_seeds;
  for (int i = 0; i < 11; ++i) {
    for (int v = 0; v < board.pits[i]; ++v)
      idx.rank += binomial(rem - v + 10 - i, 10 - i);
    rem -= board.pits[i];
  }
  return idx;
}

Board godel_unrank(const GodelIndex& index) {
  if (index.rank >= count_positions(index.n_seeds))
    throw std::out_of_range("Godel rank out of range for level");
  Board b;
  std::uint64_t rank = index.rank;
  int rem = index.n_seeds;
  for (int i = 0; i < 11; ++i) {
    int v = 0;
    for (;; ++v) {
      std::uint64_t c = binomial(rem - v + 10 - i, 10 - i);
      if (rank < c) break;
      rank -= c;
    }
    b.pits[i] = static_cast<std::uint8_t>(v);
    rem -= v;
  }
  b.pits[11] = static_cast<std::uint8_t>(rem);
  return b;
}

Board swap_rows(const Board& board) {
  Board out;
  for (int i = 0; i < 6; ++i) {
    out.pits[i] = board.pits[i + 6];
    out.pits[i + 6] = board.pits[i];
  }
  return out;
}

Board mover_relative_board(const GameState& state) {
  return state.to_move == Side::South ? state.board : swap_rows(state.board);
}

int stalemate_value(int n_seeds, const GameConfig& config) {
  return config.stalemate_rule == StalemateRule::Cancelled ? 0 : -n_seeds;
}

EndgameDatabase::EndgameDatabase(int max_seeds, std::uint64_t rule_digest)
    : max_seeds_(max_seeds), digest_(rule_digest) {
  if (max_seeds < 0 || max_seeds > 48)
    throw std::invalid_argument("max_seeds must be in [0, 48]");
  for (int n = 0; n <= max_seeds; ++n) {
    std::uint64_t c = count_positions(n);
    counts_.push_back(c);
    packed_.emplace_back((c * entry_bits + 7) / 8, 0xff);  // sentinel-filled
  }
}

int EndgameDatabase::raw_get(int level, std::uint64_t rank) const {
  const auto& bytes = packed_.at(level);
  if (rank >= counts_[level]) throw std::out_of_range("rank out of range");
  int stored = 0;
  std::uint64_t bit = rank * entry_bits;
  for (int j = 0; j < entry_bits; ++j, ++bit)
    stored = (stored << 1) | ((bytes[bit >> 3] >> (7 - (bit & 7))) & 1);
  return stored;
}

int EndgameDatabase::get(int level, std::uint64_t rank) const {
  int stored = raw_get(level, rank);
  if (stored == sentinel)
    throw std::runtime_error("unsolved database entry probed");
  return stored - max_seeds_;
}

void EndgameDatabase::set(int level, std::uint64_t rank, int value) {
  if (value < -level || value > level)
    throw std::invalid_argument("entry value exceeds its level's seed count");
  auto& bytes = packed_.at(level);
  if (rank >= counts_[level]) throw std::out_of_range("rank out of range");
  int stored = value + max_seeds_;
  std::uint64_t bit = rank * entry_bits;
  for (int j = 0; j < entry_bits; ++j, ++bit) {
    std::uint8_t mask = std::uint8_t(1) << (7 - (bit & 7));
    if ((stored >> (entry_bits - 1 - j)) & 1)
      bytes[bit >> 3] |= mask;
    else
      bytes[bit >> 3] &= ~mask;
  }
}

namespace {

void parallel_for(std::uint64_t size, int workers,
                  const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
  if (workers <= 1 || size < 1024) {
    fn(0, size);
    return;
  }
  std::vector<std::thread> threads;
  std::uint64_t chunk = (size + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::uint64_t lo = std::min<std::uint64_t>(w * chunk, size);
    std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, size);
    if (lo < hi) threads.emplace_back(fn, lo, hi);
  }
  for (auto& t : threads) t.join();
}

constexpr int kNoCapture = -32768;

// Exact values for positions whose quiet-move graph never leaves the level:
// endless circulation scores 0, so the value of each node is the largest t
// the mover can force (or minus the largest t the opponent can force). Each
// threshold t is a reachability game over (node, claimant-to-move /
// defender-to-move) pairs, solved by backward attractor propagation.
//
// `cexit` is the best single-move exit (a capture or a quiet move into an
// already-resolved node); `kids` are quiet moves staying inside the residual
// set. Residual nodes always have at least one such kid, otherwise the bound
// iteration would have closed them.
std::vector<int> solve_circulation(const std::vector<int>& cexit,
                                   const std::vector<std::vector<int>>& kids,
                                   int level) {
  const int m = static_cast<int>(cexit.size());
  std::vector<std::vector<int>> rev(m);
  for (int i = 0; i < m; ++i)
    for (int j : kids[i]) rev[j].push_back(i);

  std::vector<int> value(m, 0);
  std::vector<std::uint8_t> assigned(m, 0);
  std::vector<std::uint8_t> win_a(m), win_b(m);
  std::vector<int> pend(m), stack;

  for (int t = level; t >= 1; --t) {
    std::fill(win_a.begin(), win_a.end(), 0);
    std::fill(win_b.begin(), win_b.end(), 0);
    stack.clear();
    for (int i = 0; i < m; ++i) {
      pend[i] = static_cast<int>(kids[i].size());
      if (cexit[i] != INT32_MIN && cexit[i] >= t) {
        win_a[i] = 1;
        stack.push_back(~i);  // ~i marks an A-side event
      }
    }
    while (!stack.empty()) {
      int e = stack.back();
      stack.pop_back();
      if (e < 0) {  // node ~e became winning with the claimant to move
        int j = ~e;
        for (int i : rev[j]) {
          // the defender may not exit profitably and every kid must lose
          bool can_exit = cexit[i] != INT32_MIN && cexit[i] >= 1 - t;
          if (!win_b[i] && !can_exit && --pend[i] == 0) {
            win_b[i] = 1;
            stack.push_back(i);
          }
        }
      } else {  // node e became winning with the defender to move
        for (int i : rev[e]) {
          if (!win_a[i]) {
            win_a[i] = 1;
            stack.push_back(~i);
          }
        }
      }
    }
    for (int i = 0; i < m; ++i) {
      if (assigned[i]) continue;
      if (win_a[i]) {
        value[i] = t;
        assigned[i] = 1;
      } else if (win_b[i]) {
        value[i] = -t;
        assigned[i] = 1;
      }
    }
  }
  return value;  // unassigned nodes sit at 0: neither side forces a capture
}

struct LevelResult {
  std::vector<std::int8_t> value;
  std::vector<std::uint8_t> flag;  // 0 exact, 1 eternal, 2 unstable, 3 stalemate
};

LevelResult solve_level(int n, const GameConfig& cfg,
                        const std::vector<LevelResult>& lower, int workers) {
  const std::uint64_t size = count_positions(n);
  LevelResult res;
  res.value.assign(size, 0);
  res.flag.assign(size, 0);

  std::vector<std::int16_t> eb(size, kNoCapture);
  std::vector<std::uint64_t> quiet(size * 6);
  std::vector<std::uint8_t> quiet_cnt(size, 0);
  std::vector<std::uint8_t> resolved(size, 0);
  std::vector<int> val(size, 0);

  parallel_for(size, workers, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t r = lo; r < hi; ++r) {
      Board b = godel_unrank({n, r});
      GameState s = make_state(b, Side::South);
      auto moves = legal_moves(s);
      if (moves.empty()) {
        val[r] = stalemate_value(n, cfg);
        res.flag[r] = 3;
        resolved[r] = 1;
        continue;
      }
      int best_exact = kNoCapture;
      for (Move m : moves) {
        MoveOutcome out = apply_move(s, m, cfg);
        Board child = swap_rows(out.next.board);
        if (out.captured_now > 0) {
          int cv = lower[n - out.captured_now].value[godel_rank(child).rank];
          best_exact = std::max(best_exact, out.captured_now - cv);
        } else {
          quiet[r * 6 + quiet_cnt[r]++] = godel_rank(child).rank;
        }
      }
      eb[r] = static_cast<std::int16_t>(best_exact);
      if (quiet_cnt[r] == 0) {
        val[r] = best_exact;
        resolved[r] = 1;
      }
    }
  });

  // Optimistic/pessimistic bound iteration over the quiet-move graph.
  std::vector<int> L(size), U(size), Ln(size), Un(size);
  for (std::uint64_t r = 0; r < size; ++r) {
    if (resolved[r]) {
      L[r] = U[r] = val[r];
    } else {
      L[r] = eb[r] == kNoCapture ? -n : std::max<int>(eb[r], -n);
      U[r] = n;
    }
  }
  for (bool changed = true; changed;) {
    std::vector<std::uint8_t> worker_changed(size ? 1 + size / 16384 : 1, 0);
    parallel_for(size, workers, [&](std::uint64_t lo, std::uint64_t hi) {
      bool ch = false;
      for (std::uint64_t r = lo; r < hi; ++r) {
        if (resolved[r]) {
          Ln[r] = L[r];
          Un[r] = U[r];
          continue;
        }
        int nl = eb[r] == kNoCapture ? INT32_MIN : eb[r];
        int nu = nl;
        for (int q = 0; q < quiet_cnt[r]; ++q) {
          std::uint64_t c = quiet[r * 6 + q];
          nl = std::max(nl, -U[c]);
          nu = std::max(nu, -L[c]);
        }
        Ln[r] = std::max(nl, L[r]);
        Un[r] = std::min(nu, U[r]);
        if (Ln[r] != L[r] || Un[r] != U[r]) ch = true;
      }
      if (ch) worker_changed[lo / 16384] = 1;
    });
    L.swap(Ln);
    U.swap(Un);
    changed = false;
    for (auto c : worker_changed) changed |= c != 0;
  }

  std::vector<std::uint64_t> residual;
  for (std::uint64_t r = 0; r < size; ++r) {
    if (resolved[r]) continue;
    if (L[r] == U[r]) {
      val[r] = L[r];
      resolved[r] = 1;
    } else {
      residual.push_back(r);
    }
  }

  if (!residual.empty()) {
    const int m = static_cast<int>(residual.size());
    std::vector<int> local(size, -1);
    for (int i = 0; i < m; ++i) local[residual[i]] = i;

    std::vector<int> cexit(m, INT32_MIN);
    std::vector<std::vector<int>> kids(m);
    for (int i = 0; i < m; ++i) {
      std::uint64_t r = residual[i];
      int c = eb[r] == kNoCapture ? INT32_MIN : eb[r];
      for (int q = 0; q < quiet_cnt[r]; ++q) {
        std::uint64_t cr = quiet[r * 6 + q];
        if (local[cr] >= 0)
          kids[i].push_back(local[cr]);
        else
          c = std::max(c, -val[cr]);
      }
      cexit[i] = c;
    }

    std::vector<int> x = solve_circulation(cexit, kids, n);
    for (int i = 0; i < m; ++i) {
      std::uint64_t r = residual[i];
      val[r] = x[i];
      // recheck the one-step equation; a failure would mean a solver bug
      int backed = eb[r] == kNoCapture ? INT32_MIN : eb[r];
      for (int q = 0; q < quiet_cnt[r]; ++q)
        backed = std::max(backed, -((local[quiet[r * 6 + q]] >= 0)
                                        ? x[local[quiet[r * 6 + q]]]
                                        : val[quiet[r * 6 + q]]));
      res.flag[r] = backed == x[i] ? 1 : 2;
    }
  }

  for (std::uint64_t r = 0; r < size; ++r)
    res.value[r] = static_cast<std::int8_t>(val[r]);
  return res;
}

}  // namespace

EndgameDatabase solve(int max_seeds, const GameConfig& config, int workers,
                      SolveStats* stats) {
  config.validate();
  if (max_seeds < 0 || max_seeds > 48)
    throw std::invalid_argument("max_seeds must be in [0, 48]");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");

  std::vector<LevelResult> levels;
  if (stats) *stats = SolveStats{};
  for (int n = 0; n <= max_seeds; ++n) {
    levels.push_back(solve_level(n, config, levels, workers));
    if (stats) {
      stats->level_counts.push_back(count_positions(n));
      for (auto f : levels.back().flag) {
        if (f == 1) ++stats->eternal_entries;
        if (f == 2) ++stats->unstable_entries;
        if (f == 3) ++stats->stalemate_entries;
      }
    }
  }

  EndgameDatabase db(max_seeds, config.digest());
  for (int n = 0; n <= max_seeds; ++n)
    for (std::uint64_t r = 0; r < count_positions(n); ++r)
      db.set(n, r, levels[n].value[r]);
  return db;
}

int probe(const EndgameDatabase& db, const GameState& state) {
  int level = state.board.total();
  if (level > db.max_seeds())
    throw std::out_of_range("state holds more seeds than the database");
  Board b = mover_relative_board(state);
  return db.get(level, godel_rank(b).rank);
}

Move best_move_from_db(const EndgameDatabase& db, const GameState& state) {
  auto moves = legal_moves(state);
  if (moves.empty()) throw std::invalid_argument("no legal moves");
  GameConfig cfg;  // capture mechanics carry no configurable options
  bool have = false;
  Move best{};
  int best_score = 0, best_cap = 0;
  for (Move m : moves) {
    MoveOutcome out = apply_move(state, m, cfg);
    int score = out.captured_now - probe(db, out.next);
    if (!have || score > best_score ||
        (score == best_score && out.captured_now > best_cap)) {
      have = true;
      best = m;
      best_score = score;
      best_cap = out.captured_now;
    }
  }
  return best;
}

namespace {

void put_u16(std::ostream& out, std::uint16_t v) {
  char b[2] = {char(v & 0xff), char(v >> 8)};
  out.write(b, 2);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = char((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint16_t get_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return std::uint16_t(b[0] | (b[1] << 8));
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

constexpr char kMagic[5] = {'A', 'Y', 'O', 'D', 'B'};

}  // namespace

void save_db(const EndgameDatabase& db, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(kMagic, 5);
    out.put(0x01);
    put_u16(out, static_cast<std::uint16_t>(db.max_seeds()));
    out.put(char(EndgameDatabase::entry_bits));
    put_u64(out, db.rule_digest());
    for (int n = 0; n <= db.max_seeds(); ++n) {
      put_u64(out, db.level_count(n));
      const auto& bytes = db.packed()[n];
      out.write(reinterpret_cast<const char*>(bytes.data()),
                std::streamsize(bytes.size()));
    }
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

EndgameDatabase load_db(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, kMagic, 5) != 0)
    throw std::runtime_error("not an AYODB file: " + path);
  int version = in.get();
  if (version != 0x01) throw std::runtime_error("unsupported AYODB version");
  int max_seeds = get_u16(in);
  int bits = in.get();
  if (bits != EndgameDatabase::entry_bits)
    throw std::runtime_error("unsupported entry width");
  std::uint64_t digest = get_u64(in);
  if (!in) throw std::runtime_error("truncated AYODB header");

  EndgameDatabase db(max_seeds, digest);
  for (int n = 0; n <= max_seeds; ++n) {
    std::uint64_t count = get_u64(in);
    if (!in || count != count_positions(n))
      throw std::runtime_error("corrupt level " + std::to_string(n) +
                               ": bad entry count");
    auto& bytes = db.packed_level(n);
    in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(bytes.size()));
    if (std::size_t(in.gcount()) != bytes.size())
      throw std::runtime_error("truncated level " + std::to_string(n));
  }
  if (in.get() != EOF)
    throw std::runtime_error("trailing bytes after last level");
  return db;
}

std::string VerifyReport::summary() const {
  return "checked " + std::to_string(entries_checked) + " entries, " +
         std::to_string(self_consistency_mismatches) +
         " self-consistency mismatches, " +
         std::to_string(oracle_mismatches) + " oracle mismatches";
}

}  // namespace ayo
