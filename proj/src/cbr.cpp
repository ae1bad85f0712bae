#include "ayo/cbr.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ayo {

void EpisodeLibrary::add(const Episode& e) {
  if (e.move_label < 0 || e.move_label > 5)
    throw std::invalid_argument("episode label out of range");
  for (int v : e.values)
    if (v < 0) throw std::invalid_argument("episode pit count negative");
  by_label[e.move_label].push_back(static_cast<int>(episodes.size()));
  episodes.push_back(e);
}

SimilarityResult similarity_checked(const std::array<int, 12>& x,
                                    const std::array<int, 12>& y) {
  double mx = 0, my = 0;
  for (int i = 0; i < 12; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= 12.0;
  my /= 12.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 12; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return {0.0, true};
  return {sxy / std::sqrt(sxx * syy), false};
}

double similarity(const Episode& x, const Episode& y) {
  return similarity_checked(x.values, y.values).value;
}

std::vector<Retrieved> retrieve(const EpisodeLibrary& library,
                                const Episode& target,
                                const CbrConfig& config) {
  std::vector<Retrieved> out;
  for (const Episode& e : library.episodes) {
    if (!(e.game_value <= config.alpha)) continue;
    double s = similarity(e, target);
    if (s >= config.beta) out.push_back({&e, s});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Retrieved& a, const Retrieved& b) {
                     return a.similarity > b.similarity;
                   });
  return out;
}

double PerceptronModel::activation(int cls, const std::array<int, 12>& x) const {
  double a = weights[cls][12];
  for (int i = 0; i < 12; ++i) a += weights[cls][i] * x[i];
  return a;
}

PerceptronModel train_perceptron(const EpisodeLibrary& library, double rate,
                                 int epochs) {
  if (library.empty()) throw std::invalid_argument("empty episode library");
  if (rate <= 0) throw std::invalid_argument("learning rate must be positive");
  PerceptronModel m;
  m.learning_rate = rate;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    int errors = 0;
    for (const Episode& e : library.episodes) {
      for (int cls = 0; cls < 6; ++cls) {
        double out = m.activation(cls, e.values) >= 0.0 ? 1.0 : 0.0;
        double target = cls == e.move_label ? 1.0 : 0.0;
        if (out != target) {
          ++errors;
          double step = rate * (target - out);
          for (int i = 0; i < 12; ++i) m.weights[cls][i] += step * e.values[i];
          m.weights[cls][12] += step;
        }
      }
    }
    m.epochs_trained = epoch + 1;
    m.final_errors = errors;
    if (errors == 0) break;
  }
  return m;
}

int classify(const PerceptronModel& model, const Episode& target,
             const std::vector<int>& legal) {
  if (legal.empty()) throw std::invalid_argument("no legal classes");
  int best = -1;
  double best_a = 0;
  for (int cls : legal) {
    double a = model.activation(cls, target.values);
    if (best < 0 || a > best_a) {
      best = cls;
      best_a = a;
    }
  }
  return best;
}

Episode episode_view(const GameState& state) {
  Episode e;
  int own = state.to_move == Side::South ? 0 : 6;
  for (int i = 0; i < 12; ++i) e.values[i] = state.board.pits[(own + i) % 12];
  return e;
}

int relative_label(Move move, Side mover) {
  return mover == Side::South ? move.pit : move.pit - 6;
}

Move absolute_move(int label, Side mover) {
  return Move{mover == Side::South ? label : label + 6};
}

namespace {

std::vector<int> legal_labels(const GameState& state) {
  std::vector<int> out;
  for (Move m : legal_moves(state)) out.push_back(relative_label(m, state.to_move));
  return out;
}

}  // namespace

Move casing_move(const GameState& state, const EpisodeLibrary& library,
                 const PerceptronModel& model, const CbrConfig& config) {
  auto legal = legal_labels(state);
  if (legal.empty()) throw std::invalid_argument("no legal moves");
  Episode target = episode_view(state);
  for (const Retrieved& r : retrieve(library, target, config)) {
    int label = r.episode->move_label;
    if (std::find(legal.begin(), legal.end(), label) != legal.end())
      return absolute_move(label, state.to_move);
  }
  return absolute_move(classify(model, target, legal), state.to_move);
}

HybridDecision hybrid_move(const GameState& state, int depth,
                           const EvalWeights& weights,
                           const EpisodeLibrary& library,
                           const CbrConfig& cbr_config,
                           const GameConfig& game_config) {
  SearchResult sr = alphabeta(state, depth, weights, game_config);
  if (!sr.best_move) throw std::invalid_argument("no legal moves");
  HybridDecision d{*sr.best_move, false, 0.0};
  auto legal = legal_labels(state);
  Episode target = episode_view(state);
  for (const Retrieved& r : retrieve(library, target, cbr_config)) {
    int label = r.episode->move_label;
    if (std::find(legal.begin(), legal.end(), label) == legal.end()) continue;
    Move cbr = absolute_move(label, state.to_move);
    d.similarity_used = r.similarity;
    if (!(cbr == d.move)) {
      d.move = cbr;
      d.overridden = true;
    }
    break;
  }
  return d;
}

void save_library(const EpisodeLibrary& library, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    for (const Episode& e : library.episodes) {
      for (int i = 0; i < 12; ++i) out << (i ? "," : "") << e.values[i];
      out << ';' << e.move_label << ';' << e.game_value << '\n';
    }
  }
  std::filesystem::rename(tmp, path);
}

EpisodeLibrary load_library(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  EpisodeLibrary lib;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Episode e;
    std::istringstream ss(line);
    char sep;
    for (int i = 0; i < 12; ++i) {
      if (!(ss >> e.values[i]))
        throw std::runtime_error("bad episode at line " + std::to_string(lineno));
      if (i < 11 && (!(ss >> sep) || sep != ','))
        throw std::runtime_error("bad episode at line " + std::to_string(lineno));
    }
    if (!(ss >> sep) || sep != ';' || !(ss >> e.move_label) || !(ss >> sep) ||
        sep != ';' || !(ss >> e.game_value))
      throw std::runtime_error("bad episode at line " + std::to_string(lineno));
    lib.add(e);
  }
  return lib;
}

void save_model(const PerceptronModel& model, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.precision(17);
    out << model.learning_rate << ' ' << model.epochs_trained << ' '
        << model.final_errors << '\n';
    for (const auto& row : model.weights) {
      for (int i = 0; i < 13; ++i) out << (i ? " " : "") << row[i];
      out << '\n';
    }
  }
  std::filesystem::rename(tmp, path);
}

PerceptronModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  PerceptronModel m;
  if (!(in >> m.learning_rate >> m.epochs_trained >> m.final_errors))
    throw std::runtime_error("bad model file " + path);
  for (auto& row : m.weights)
    for (auto& w : row)
      if (!(in >> w)) throw std::runtime_error("bad model file " + path);
  return m;
}

}  // namespace ayo
