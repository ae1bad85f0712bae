// Acceptance gate: one line per criterion, nonzero exit when any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ayo/arena.hpp"
#include "ayo/cbr.hpp"
#include "ayo/endgame.hpp"
#include "ayo/endgame_reference.hpp"
#include "ayo/game.hpp"
#include "ayo/notation.hpp"
#include "ayo/search.hpp"

using namespace ayo;

namespace {

int failures = 0;

void report_line(int number, const std::string& what, bool ok,
                 const std::string& detail) {
  std::printf("criterion %2d %s: %s (%s)\n", number, ok ? "PASS" : "FAIL",
              what.c_str(), detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

GameState random_position(std::mt19937_64& rng, const GameConfig& cfg) {
  for (;;) {
    GameState s = new_game(cfg);
    int plies = int(rng() % 60);
    bool ok = true;
    for (int i = 0; i < plies; ++i) {
      if (status(s, cfg).terminal()) {
        ok = false;
        break;
      }
      auto legal = legal_moves(s);
      s = apply_move(s, legal[rng() % legal.size()], cfg).next;
    }
    if (ok && !status(s, cfg).terminal())
      return make_state(s.board, s.to_move, s.captured_south,
                        s.captured_north);
  }
}

// ---------------------------------------------------------------- 1

void criterion_rules_fuzz() {
  GameConfig cfg;
  std::mt19937_64 rng(20240401);
  auto t0 = std::chrono::steady_clock::now();
  int games = 0;
  bool conserved = true, terminated = true;
  for (int g = 0; g < 10000; ++g) {
    GameState s = new_game(cfg);
    for (;;) {
      if (s.total_seeds() != 48) {
        conserved = false;
        break;
      }
      GameStatus st = status(s, cfg);
      if (st.terminal()) break;
      auto legal = legal_moves(s);
      if (legal.empty()) {
        terminated = false;
        break;
      }
      s = apply_move(s, legal[rng() % legal.size()], cfg).next;
    }
    ++games;
  }
  double dt = seconds_since(t0);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d games, %.1fs", games, dt);
  report_line(1, "rules fuzz", conserved && terminated && dt < 30.0, buf);
}

// ---------------------------------------------------------------- 2

void criterion_search_soundness() {
  GameConfig cfg;
  EvalWeights w;
  std::mt19937_64 rng(7);
  int mismatches = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 1000; ++i) {
    GameState s = random_position(rng, cfg);
    for (int d = 1; d <= 6; ++d) {
      SearchResult mm = minimax(s, d, w, cfg);
      SearchResult ab = alphabeta(s, d, w, cfg);
      if (mm.value != ab.value || mm.best_move != ab.best_move) ++mismatches;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "1000 positions x depths 1-6, %d mismatches, %.1fs",
                mismatches, seconds_since(t0));
  report_line(2, "alpha-beta equals plain minimax", mismatches == 0, buf);
}

// ---------------------------------------------------------------- 3

ExplicitTree random_tree(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 4 == 0)
    return ExplicitTree::leaf(double(int(rng() % 21) - 10));
  std::vector<ExplicitTree> kids;
  int n = 1 + int(rng() % 3);
  for (int i = 0; i < n; ++i) kids.push_back(random_tree(rng, depth - 1));
  return rng() % 2 ? ExplicitTree::max_node(std::move(kids))
                   : ExplicitTree::min_node(std::move(kids));
}

void criterion_stockman() {
  std::mt19937_64 rng(23);
  int bad = 0, done = 0;
  while (done < 100) {
    ExplicitTree t = random_tree(rng, 4);
    auto [cmin, cmax] = solution_tree_counts(t);
    if (cmin > 50000 || cmax > 50000) continue;  // keep enumeration feasible
    ++done;
    StockmanTriple r = solution_tree_check(t);
    if (r.f != r.max_over_min_trees || r.f != r.min_over_max_trees) ++bad;
  }
  report_line(3, "Stockman triple equality on random trees", bad == 0,
              "100 trees, " + std::to_string(bad) + " violations");
}

// ---------------------------------------------------------------- 4

void criterion_similarity() {
  std::mt19937_64 rng(41);
  double worst = 0;
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    std::array<int, 12> x, y;
    for (auto& v : x) v = int(rng() % 13);
    for (auto& v : y) v = int(rng() % 13);

    // independent two-pass Pearson
    double mx = 0, my = 0;
    for (int i = 0; i < 12; ++i) mx += x[i], my += y[i];
    mx /= 12, my /= 12;
    double num = 0, dx2 = 0, dy2 = 0;
    for (int i = 0; i < 12; ++i) {
      num += (x[i] - mx) * (y[i] - my);
      dx2 += (x[i] - mx) * (x[i] - mx);
      dy2 += (y[i] - my) * (y[i] - my);
    }
    double want = (dx2 == 0 || dy2 == 0) ? 0 : num / std::sqrt(dx2 * dy2);

    Episode ex, ey;
    ex.values = x;
    ey.values = y;
    double got = similarity(ex, ey);
    worst = std::max(worst, std::abs(got - want));
    if (std::abs(got - want) > 1e-12) ++bad;
    if (std::abs(got) > 1.0 + 1e-12) ++bad;
    if (got != similarity(ey, ex)) ++bad;

    // positive affine transform of one argument
    Episode ez;
    for (int i = 0; i < 12; ++i) ez.values[i] = 3 * y[i] + 2;
    if (std::abs(similarity(ex, ez) - got) > 1e-9) ++bad;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "1000 pairs, worst abs error %.2e, %d violations",
                worst, bad);
  report_line(4, "similarity oracle and properties", bad == 0, buf);
}

// ---------------------------------------------------------------- 5

void criterion_endgame_correctness() {
  GameConfig cfg;
  auto t0 = std::chrono::steady_clock::now();
  EndgameDatabase db6 = solve(6, cfg, 1);
  VerifyReport rep = verify(db6, VerifyMode::Exhaustive(6), cfg);
  double t6 = seconds_since(t0);

  auto t1 = std::chrono::steady_clock::now();
  EndgameDatabase db10 = solve(10, cfg, 1);
  double t10 = seconds_since(t1);

  bool ok = rep.ok() && t6 < 60.0 && t10 < 300.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "max_seeds=6: %llu entries, %llu/%llu mismatches, %.1fs; "
                "max_seeds=10 solve %.1fs",
                (unsigned long long)rep.entries_checked,
                (unsigned long long)rep.oracle_mismatches,
                (unsigned long long)rep.self_consistency_mismatches, t6, t10);
  report_line(5, "endgame database vs forward search", ok, buf);
}

// ---------------------------------------------------------------- 6

void criterion_ranking() {
  bool ok = count_positions(2) == 78 && count_positions(4) == 1365;
  std::uint64_t checked = 0;
  for (int n = 0; n <= 6 && ok; ++n) {
    std::uint64_t total = count_positions(n);
    for (std::uint64_t r = 0; r < total; ++r) {
      Board b = godel_unrank({n, r});
      GodelIndex back = godel_rank(b);
      if (back.n_seeds != n || back.rank != r || b.total() != n) {
        ok = false;
        break;
      }
      ++checked;
    }
  }
  report_line(6, "rank/unrank bijection through level 6", ok,
              std::to_string(checked) + " round trips");
}

// ---------------------------------------------------------------- 7

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_parallel_determinism() {
  GameConfig cfg;
  EndgameDatabase one = solve(7, cfg, 1);
  EndgameDatabase four = solve(7, cfg, 4);
  save_db(one, "acc_w1.ayodb");
  save_db(four, "acc_w4.ayodb");
  bool db_ok = file_bytes("acc_w1.ayodb") == file_bytes("acc_w4.ayodb");
  std::filesystem::remove("acc_w1.ayodb");
  std::filesystem::remove("acc_w4.ayodb");

  AgentSpec a = AgentSpec::minimax_agent(2);
  AgentSpec b = AgentSpec::random_agent(5);
  MatchOptions serial, parallel;
  serial.threads = 1;
  parallel.threads = 4;
  serial.opening_plies = parallel.opening_plies = 2;
  MatchRow rs{"L", a.name, b.name, run_match(a, b, 24, cfg, 77, true, serial)};
  MatchRow rp{"L", a.name, b.name, run_match(a, b, 24, cfg, 77, true, parallel)};
  bool csv_ok = report(std::vector<MatchRow>{rs}, ReportFormat::Csv) ==
                report(std::vector<MatchRow>{rp}, ReportFormat::Csv);

  report_line(7, "worker-count determinism", db_ok && csv_ok,
              std::string("db bytes ") + (db_ok ? "identical" : "differ") +
                  ", csv " + (csv_ok ? "identical" : "differs"));
}

// ------------------------------------------------------------- 8, 9

// Symmetric 8-seed start whose database value is exactly 0, so perfect play
// never loses from either seat.
GameState variant_start(const EndgameDatabase& db8) {
  for (std::uint64_t r = 0; r < count_positions(8); ++r) {
    Board b = godel_unrank({8, r});
    bool symmetric = true;
    for (int i = 0; i < 6; ++i)
      if (b.pits[i] != b.pits[i + 6]) symmetric = false;
    if (!symmetric) continue;
    GameState s = make_state(b, Side::South);
    if (legal_moves(s).empty()) continue;
    if (db8.get(8, r) == 0) return s;
  }
  throw std::runtime_error("no balanced symmetric 8-seed start found");
}

void criteria_variant(const char* what8, const char* what9_depth,
                      const char* what9_cbr) {
  GameConfig cfg;
  auto db8 = std::make_shared<EndgameDatabase>(solve(8, cfg, 1));
  GameState start = variant_start(*db8);
  AgentSpec perfect = AgentSpec::db_agent(db8);

  MatchOptions from_start;
  from_start.start = start;

  // library for the CBR players: winner plies of perfect-play self games
  MatchOptions self_opts = from_start;
  self_opts.opening_plies = 2;
  std::vector<GameRecord> self_games;
  for (int g = 0; g < 500; ++g)
    self_games.push_back(play_game(perfect, perfect, cfg, 5000 + g, self_opts));
  auto lib =
      std::make_shared<EpisodeLibrary>(harvest_episodes(self_games, true));
  CbrConfig cb;
  cb.beta = 0.95;

  // --- criterion 8: never lose with the root value at 0
  bool never_lost = true;
  std::string detail8;
  AgentSpec rivals[] = {AgentSpec::random_agent(9), AgentSpec::minimax_agent(3),
                        AgentSpec::minimax_cbr_agent(3, lib, cb)};
  for (const AgentSpec& rival : rivals) {
    MatchStats st = run_match(perfect, rival, 200, cfg, 333, true, from_start);
    if (st.wins_b > 0) never_lost = false;
    detail8 += rival.name + " " + std::to_string(st.wins_a) + "/" +
               std::to_string(st.draws) + "/" + std::to_string(st.wins_b) + " ";
  }
  report_line(8, what8, never_lost, detail8 + "as W/D/L over 200 games each");

  // --- criterion 9a: depth dominance on the standard game
  MatchOptions open2;
  open2.opening_plies = 2;
  MatchStats depth = run_match(AgentSpec::minimax_agent(4),
                               AgentSpec::minimax_agent(1), 100, cfg, 11, true,
                               open2);
  bool depth_ok = depth.wins_a >= 90;
  report_line(9, what9_depth, depth_ok,
              "minimax:4 won " + std::to_string(depth.wins_a) + "/100");

  // --- criterion 9b: the hybrid holds its own against the grandmaster proxy
  MatchOptions var_open = from_start;
  var_open.opening_plies = 2;
  AgentSpec gm = AgentSpec::minimax_agent(5);
  MatchStats cbr_run = run_match(AgentSpec::minimax_cbr_agent(3, lib, cb), gm,
                                 200, cfg, 99, true, var_open);
  MatchStats mm_run = run_match(AgentSpec::minimax_agent(3), gm, 200, cfg, 99,
                                true, var_open);
  double cbr_score = (cbr_run.wins_a + cbr_run.draws) / 200.0;
  double mm_score = (mm_run.wins_a + mm_run.draws) / 200.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "win+draw rate cbr %.3f vs minimax %.3f",
                cbr_score, mm_score);
  report_line(9, what9_cbr, cbr_score >= mm_score - 0.05, buf);
}

// ---------------------------------------------------------------- 10

void criterion_report_fidelity() {
  MatchRow row;
  row.level = "AMATEUR";
  row.player_a = "a";
  row.player_b = "b";
  row.stats.games = 6;
  row.stats.mean_plies = 25.17;
  row.stats.std_plies = 0.41;
  std::string md = report(std::vector<MatchRow>{row}, ReportFormat::Markdown);
  bool cell = md.find("25.17(0.41)") != std::string::npos;

  std::string csv = report(std::vector<MatchRow>{row}, ReportFormat::Csv);
  bool overrides = csv.find("avg_overrides_a,std_overrides_a") != std::string::npos;

  CapabilityRow cap;
  cap.agent = "x";
  std::string cm = report(std::vector<CapabilityRow>{cap}, ReportFormat::Csv);
  bool schema =
      cm.rfind("agent,uses_minimax,uses_endgame,initiation,beginner,amateur,"
               "grandmaster\n",
               0) == 0;

  report_line(10, "report cell format and schemas", cell && overrides && schema,
              std::string("cell ") + (cell ? "exact" : "WRONG") + ", overrides " +
                  (overrides ? "present" : "MISSING") + ", capability " +
                  (schema ? "ok" : "WRONG"));
}

// ---------------------------------------------------------------- 11

void criterion_round_trips() {
  std::mt19937_64 rng(61);
  int db_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    int max_seeds = int(rng() % 4);
    EndgameDatabase db(max_seeds, rng());
    for (int n = 0; n <= max_seeds; ++n)
      for (std::uint64_t r = 0; r < count_positions(n); ++r)
        db.set(n, r, int(rng() % (2 * n + 1)) - n);
    save_db(db, "acc_rt.ayodb");
    EndgameDatabase back = load_db("acc_rt.ayodb");
    if (!(back == db)) ++db_bad;
  }
  std::filesystem::remove("acc_rt.ayodb");

  GameConfig cfg;
  int notation_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    GameState s = random_position(rng, cfg);
    GameState back = parse_state(format_state(s), cfg);
    if (!(back.board == s.board) || back.to_move != s.to_move ||
        back.captured_south != s.captured_south ||
        back.captured_north != s.captured_north)
      ++notation_bad;
  }
  report_line(11, "file and notation round trips", db_bad == 0 && notation_bad == 0,
              std::to_string(db_bad) + " db failures, " +
                  std::to_string(notation_bad) + " notation failures");
}

}  // namespace

int main() {
  criterion_rules_fuzz();
  criterion_search_soundness();
  criterion_stockman();
  criterion_similarity();
  criterion_endgame_correctness();
  criterion_ranking();
  criterion_parallel_determinism();
  criteria_variant("perfect play never loses the 8-seed variant",
                   "depth dominance: minimax(4) over minimax(1)",
                   "hybrid within 5 points of minimax vs grandmaster proxy");
  criterion_report_fidelity();
  criterion_round_trips();
  if (failures == 0) std::printf("all criteria passed\n");
  return failures == 0 ? 0 : 1;
}
