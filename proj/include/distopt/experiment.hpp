#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "distopt/errordyn.hpp"
#include "distopt/methods.hpp"
#include "distopt/reference.hpp"

namespace distopt {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MethodEntry {
  Method method = Method::Dgm;
  std::string b_token;  // for generalized: zero | bI:<b|auto> | bW:<b'|auto|L> | extra
  std::string label;    // as written in the config
};

/// Step size, either absolute ("0.01") or relative to the smoothness
/// constant ("1/(3L)", resolved once L is known).
struct StepSizeSpec {
  std::string label;
  double absolute = 0.0;  // 0 means relative
  double l_divisor = 0.0;

  double resolve(double lip) const { return absolute > 0.0 ? absolute : 1.0 / (l_divisor * lip); }
};

enum class ProblemKind { Logistic, Quadratic };

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Logistic;
  // network
  int n = 30;
  double radius = 0.0;  // 0 = auto: sqrt(ln n / n)
  std::uint64_t graph_seed = 1;
  std::string graph_file;
  // logistic data
  int samples_per_node = 2;
  int d = 6;
  double reg = 0.03;
  double noise_variance = 0.4;
  std::uint64_t data_seed = 7;
  std::string data_file;
  // quadratic data
  double mu = 1.0;
  double lip = 10.0;
  // runs
  std::vector<MethodEntry> methods;
  std::vector<StepSizeSpec> alphas;
  int iters = 5000;
  bool provable_step = false;  // replace alphas by 0.9 * the provable step bound per method
  std::string out = "results";
  double ref_tol = 1e-12;

  double resolved_radius() const {
    return radius > 0.0 ? radius : std::sqrt(std::log(static_cast<double>(n)) / n);
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + v);
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + v);
  }
}

}  // namespace detail

inline MethodEntry parse_method_token(const std::string& token) {
  MethodEntry e;
  e.label = token;
  if (token == "dgm") {
    e.method = Method::Dgm;
  } else if (token == "extra") {
    e.method = Method::Extra;
  } else if (token == "harnessing") {
    e.method = Method::Harnessing;
  } else if (token == "generalized" || token.rfind("generalized:", 0) == 0) {
    e.method = Method::Generalized;
    e.b_token = token == "generalized" ? "bI:auto" : token.substr(std::string("generalized:").size());
  } else {
    throw ConfigError("config: unknown method '" + token + "'");
  }
  return e;
}

inline StepSizeSpec parse_step_size(const std::string& token) {
  StepSizeSpec s;
  s.label = token;
  // "1/(cL)" form
  if (token.rfind("1/(", 0) == 0 && token.size() > 5 && token.substr(token.size() - 2) == "L)") {
    const std::string num = token.substr(3, token.size() - 5);
    s.l_divisor = detail::parse_double("alphas", detail::trim(num));
    if (!(s.l_divisor > 0.0)) throw ConfigError("config: step-size divisor must be positive");
    return s;
  }
  s.absolute = detail::parse_double("alphas", token);
  if (!(s.absolute > 0.0)) throw ConfigError("config: step sizes must be positive");
  return s;
}

/// Resolves a B token once the instance constants are known. `note` collects
/// human-readable remarks (e.g. the bW:auto fallback to b' = L).
inline BMatrixSpec resolve_b_token(const std::string& token, double mu, double lip,
                                   const WeightMatrix& w, std::string* note = nullptr) {
  if (token.empty() || token == "zero") return BMatrixSpec::zero();
  if (token == "extra") return BMatrixSpec::w_over_alpha();
  if (token.rfind("bI:", 0) == 0) {
    const std::string v = token.substr(3);
    if (v == "auto") return BMatrixSpec::scaled_identity(tune_b_star(mu, lip));
    return BMatrixSpec::scaled_identity(detail::parse_double("b-spec", v));
  }
  if (token.rfind("bW:", 0) == 0) {
    const std::string v = token.substr(3);
    if (v == "L") return BMatrixSpec::scaled_weight(lip);
    if (v == "auto") {
      if (w.lambda_min > 0.0) return BMatrixSpec::scaled_weight(tune_b_prime(mu, lip, w.lambda_min));
      if (note) *note += "bW:auto: lambda_N <= 0, using the heuristic b' = L; ";
      return BMatrixSpec::scaled_weight(lip);
    }
    return BMatrixSpec::scaled_weight(detail::parse_double("b-spec", v));
  }
  throw ConfigError("config: unknown B spec '" + token + "'");
}

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  cfg.methods.clear();
  cfg.alphas.clear();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key == "problem") {
      if (val == "logistic")
        cfg.problem = ProblemKind::Logistic;
      else if (val == "quadratic")
        cfg.problem = ProblemKind::Quadratic;
      else
        throw ConfigError("config: unknown problem '" + val + "'");
    } else if (key == "n") {
      cfg.n = static_cast<int>(detail::parse_int(key, val));
    } else if (key == "radius") {
      cfg.radius = val == "auto" ? 0.0 : detail::parse_double(key, val);
    } else if (key == "graph_seed") {
      cfg.graph_seed = static_cast<std::uint64_t>(detail::parse_int(key, val));
    } else if (key == "graph_file") {
      cfg.graph_file = val;
    } else if (key == "samples_per_node") {
      cfg.samples_per_node = static_cast<int>(detail::parse_int(key, val));
    } else if (key == "d") {
      cfg.d = static_cast<int>(detail::parse_int(key, val));
    } else if (key == "reg") {
      cfg.reg = detail::parse_double(key, val);
    } else if (key == "noise_variance") {
      cfg.noise_variance = detail::parse_double(key, val);
    } else if (key == "data_seed") {
      cfg.data_seed = static_cast<std::uint64_t>(detail::parse_int(key, val));
    } else if (key == "data_file") {
      cfg.data_file = val;
    } else if (key == "mu") {
      cfg.mu = detail::parse_double(key, val);
    } else if (key == "lip") {
      cfg.lip = detail::parse_double(key, val);
    } else if (key == "methods") {
      for (const auto& tok : detail::split_list(val)) cfg.methods.push_back(parse_method_token(tok));
    } else if (key == "alphas") {
      for (const auto& tok : detail::split_list(val)) cfg.alphas.push_back(parse_step_size(tok));
    } else if (key == "iters") {
      cfg.iters = static_cast<int>(detail::parse_int(key, val));
    } else if (key == "provable_step") {
      cfg.provable_step = val == "true" || val == "1";
    } else if (key == "out") {
      cfg.out = val;
    } else if (key == "ref_tol") {
      cfg.ref_tol = detail::parse_double(key, val);
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (cfg.methods.empty())
    cfg.methods = {parse_method_token("harnessing"), parse_method_token("extra"),
                   parse_method_token("generalized:bI:auto"), parse_method_token("generalized:bW:L")};
  if (cfg.alphas.empty() && !cfg.provable_step)
    cfg.alphas = {parse_step_size("1/(3L)")};
  if (cfg.iters < 1) throw ConfigError("config: iters must be >= 1");
  return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

inline std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "problem = " << (cfg.problem == ProblemKind::Logistic ? "logistic" : "quadratic") << "\n";
  if (cfg.graph_file.empty()) {
    out << "n = " << cfg.n << "\n";
    out << "radius = " << cfg.resolved_radius() << "\n";
    out << "graph_seed = " << cfg.graph_seed << "\n";
  } else {
    out << "graph_file = " << cfg.graph_file << "\n";
  }
  if (cfg.problem == ProblemKind::Logistic) {
    if (cfg.data_file.empty()) {
      out << "samples_per_node = " << cfg.samples_per_node << "\n";
      out << "d = " << cfg.d << "\n";
      out << "noise_variance = " << cfg.noise_variance << "\n";
      out << "data_seed = " << cfg.data_seed << "\n";
    } else {
      out << "data_file = " << cfg.data_file << "\n";
    }
    out << "reg = " << cfg.reg << "\n";
  } else {
    out << "d = " << cfg.d << "\n";
    out << "mu = " << cfg.mu << "\n";
    out << "lip = " << cfg.lip << "\n";
    out << "data_seed = " << cfg.data_seed << "\n";
  }
  out << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i)
    out << (i ? ", " : "") << cfg.methods[i].label;
  out << "\n";
  if (cfg.provable_step) {
    out << "provable_step = true\n";
  } else {
    out << "alphas = ";
    for (std::size_t i = 0; i < cfg.alphas.size(); ++i)
      out << (i ? ", " : "") << cfg.alphas[i].label;
    out << "\n";
  }
  out << "iters = " << cfg.iters << "\n";
  out << "out = " << cfg.out << "\n";
  out << "ref_tol = " << cfg.ref_tol << "\n";
  return out.str();
}

/// Network + problem + reference solution, built once per experiment.
struct Instance {
  Graph graph;
  WeightMatrix weight;
  Problem problem;
  Eigen::VectorXd x_star;
  std::uint64_t graph_seed_used = 0;
  std::string notes;
};

inline Instance build_instance(const ExperimentConfig& cfg) {
  Graph g;
  std::uint64_t seed_used = cfg.graph_seed;
  std::string notes;
  if (!cfg.graph_file.empty()) {
    std::ifstream in(cfg.graph_file);
    if (!in) throw ConfigError("config: cannot open graph file '" + cfg.graph_file + "'");
    g = read_edge_list(in);
    if (!is_connected(g)) throw ConfigError("graph file: graph is not connected");
  } else {
    // disconnected draws are re-drawn with an incremented seed
    g = random_geometric(cfg.n, cfg.resolved_radius(), seed_used);
    while (!is_connected(g)) {
      ++seed_used;
      g = random_geometric(cfg.n, cfg.resolved_radius(), seed_used);
    }
    if (seed_used != cfg.graph_seed)
      notes += "graph: re-drew until connected, final seed " + std::to_string(seed_used) + "; ";
  }
  WeightMatrix w = metropolis_weights(g);
  Problem problem = [&] {
    if (cfg.problem == ProblemKind::Quadratic)
      return Problem::quadratic(random_quadratic(g.n, cfg.d, cfg.mu, cfg.lip, cfg.data_seed),
                                cfg.mu, cfg.lip);
    if (!cfg.data_file.empty()) {
      std::ifstream in(cfg.data_file);
      if (!in) throw ConfigError("config: cannot open data file '" + cfg.data_file + "'");
      LogisticSpec spec = read_dataset_csv(in, cfg.reg);
      if (static_cast<int>(spec.features.size()) != g.n)
        throw ConfigError("data file: node count does not match the network");
      return Problem::logistic(std::move(spec));
    }
    return Problem::logistic(
        generate_logistic_data(g.n, cfg.samples_per_node, cfg.d, cfg.noise_variance, cfg.data_seed,
                               cfg.reg)
            .spec);
  }();
  Eigen::VectorXd x_star = solve_reference(problem, {cfg.ref_tol, 500000});
  return {std::move(g), std::move(w), std::move(problem), std::move(x_star), seed_used,
          std::move(notes)};
}

struct CellResult {
  std::string method_label;
  std::string alpha_label;
  double alpha = 0.0;
  std::vector<double> relative_errors;
  std::vector<double> consensus_residuals;
  bool diverged = false;
  long iters_to_1e2 = -1;  // -1 = not reached
  long iters_to_1e4 = -1;
  long iters_to_1e6 = -1;
  double terminal_error = 0.0;
  double rate_slope = 0.0;  // least-squares slope of ln(error) over the tail
};

struct ResultTable {
  std::vector<CellResult> cells;
  double mu = 0.0, lip = 0.0, sigma = 0.0, lambda_min = 0.0;
  int n = 0, d = 0;
  std::uint64_t graph_seed_used = 0;
  std::string notes;
};

namespace detail {

inline long first_at_or_below(const std::vector<double>& errs, double thr) {
  for (std::size_t k = 0; k < errs.size(); ++k)
    if (errs[k] <= thr) return static_cast<long>(k);
  return -1;
}

inline double tail_log_slope(const std::vector<double>& errs) {
  // fit over the tail of the decaying window, stopping at the numerical floor
  std::vector<std::pair<double, double>> window;
  for (std::size_t k = 0; k < errs.size(); ++k) {
    if (errs[k] <= 1e-12) break;
    window.emplace_back(static_cast<double>(k), std::log(errs[k]));
  }
  const std::vector<std::pair<double, double>> pts(
      window.begin() + static_cast<std::ptrdiff_t>(window.size() / 3), window.end());
  if (pts.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = pts.size() * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (pts.size() * sxy - sx * sy) / denom;
}

inline void summarize(CellResult& cell) {
  cell.iters_to_1e2 = first_at_or_below(cell.relative_errors, 1e-2);
  cell.iters_to_1e4 = first_at_or_below(cell.relative_errors, 1e-4);
  cell.iters_to_1e6 = first_at_or_below(cell.relative_errors, 1e-6);
  cell.terminal_error = cell.relative_errors.empty() ? 0.0 : cell.relative_errors.back();
  cell.rate_slope = tail_log_slope(cell.relative_errors);
}

}  // namespace detail

/// Runs every (method, alpha) cell from zero initialization against the
/// shared reference solution. Cells run in parallel; divergence is recorded
/// per cell, not fatal.
inline ResultTable run_experiment(const ExperimentConfig& cfg) {
  const Instance inst = build_instance(cfg);
  ResultTable table;
  table.mu = inst.problem.mu();
  table.lip = inst.problem.lip();
  table.sigma = inst.weight.sigma;
  table.lambda_min = inst.weight.lambda_min;
  table.n = inst.problem.n();
  table.d = inst.problem.d();
  table.graph_seed_used = inst.graph_seed_used;
  table.notes = inst.notes;

  struct CellPlan {
    MethodEntry entry;
    BMatrixSpec b_spec;
    std::string alpha_label;
    double alpha;
  };
  std::vector<CellPlan> plans;
  for (const auto& entry : cfg.methods) {
    std::string note;
    BMatrixSpec b = entry.method == Method::Generalized
                        ? resolve_b_token(entry.b_token, table.mu, table.lip, inst.weight, &note)
                        : BMatrixSpec::zero();
    if (!note.empty()) table.notes += entry.label + ": " + note;
    if (cfg.provable_step) {
      if (entry.method == Method::Extra || b.kind == BMatrixSpec::Kind::WOverAlpha)
        throw ConfigError(
            "provable-step mode does not cover the W/alpha weighting (its ||B|| depends on the "
            "step size); use harnessing, bI, or bW variants");
      const double amax = max_step_bound(table.mu, table.lip, table.sigma, b);
      plans.push_back({entry, b, "provable-step", 0.9 * amax});
    } else {
      for (const auto& a : cfg.alphas)
        plans.push_back({entry, b, a.label, a.resolve(table.lip)});
    }
  }

  std::vector<CellResult> cells(plans.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < plans.size(); i = next.fetch_add(1)) {
      const auto& plan = plans[i];
      StepConfig sc{plan.alpha, plan.b_spec, inst.weight};
      const Trajectory traj =
          run(plan.entry.method, sc, inst.problem, Eigen::VectorXd::Zero(inst.problem.d()),
              cfg.iters, inst.x_star, {/*record_iterates=*/false, /*record_aux=*/false});
      CellResult cell;
      cell.method_label = plan.entry.label;
      cell.alpha_label = plan.alpha_label;
      cell.alpha = plan.alpha;
      cell.diverged = traj.diverged;
      cell.relative_errors.reserve(traj.records.size());
      for (const auto& r : traj.records) {
        cell.relative_errors.push_back(r.relative_error);
        cell.consensus_residuals.push_back(r.consensus_residual);
      }
      detail::summarize(cell);
      cells[i] = std::move(cell);
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers = std::min<std::size_t>(hw, plans.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t + 1 < n_workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  table.cells = std::move(cells);
  return table;
}

inline std::string sanitize_label(std::string s) {
  for (auto& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '-';
  return s;
}

/// results.csv: k, method, alpha, relative_error, consensus_residual.
/// Deterministic cell order and formatting.
inline void write_csv(const ResultTable& table, std::ostream& out) {
  out << "k,method,alpha,relative_error,consensus_residual\n";
  std::ostringstream line;
  line.precision(12);
  for (const auto& cell : table.cells)
    for (std::size_t k = 0; k < cell.relative_errors.size(); ++k) {
      line.str("");
      line << k << "," << cell.method_label << "," << cell.alpha << ","
           << cell.relative_errors[k] << "," << cell.consensus_residuals[k];
      out << line.str() << "\n";
    }
}

/// One gnuplot-ready "k error" file per (step size, method) cell.
inline void write_plot_files(const ResultTable& table, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& cell : table.cells) {
    const std::string name = "plot_" + sanitize_label(cell.alpha_label) + "_" +
                             sanitize_label(cell.method_label) + ".dat";
    std::ofstream out(std::filesystem::path(dir) / name);
    out.precision(12);
    out << "# method " << cell.method_label << ", alpha " << cell.alpha << "\n";
    for (std::size_t k = 0; k < cell.relative_errors.size(); ++k)
      out << k << " " << cell.relative_errors[k] << "\n";
  }
}

inline void write_summary(const ResultTable& table, std::ostream& out) {
  out << "n=" << table.n << " d=" << table.d << " mu=" << table.mu << " L=" << table.lip
      << " sigma=" << table.sigma << " lambda_N=" << table.lambda_min
      << " graph_seed=" << table.graph_seed_used << "\n";
  if (!table.notes.empty()) out << "notes: " << table.notes << "\n";
  for (const auto& cell : table.cells) {
    out << cell.method_label << " @ " << cell.alpha_label << " (alpha=" << cell.alpha << "): ";
    if (cell.diverged) {
      out << "DIVERGED\n";
      continue;
    }
    auto fmt = [](long it) { return it < 0 ? std::string("not reached") : std::to_string(it); };
    out << "to 1e-2: " << fmt(cell.iters_to_1e2) << ", to 1e-4: " << fmt(cell.iters_to_1e4)
        << ", to 1e-6: " << fmt(cell.iters_to_1e6) << ", terminal " << cell.terminal_error
        << ", slope " << cell.rate_slope << "\n";
  }
}

/// Per step size, ranks methods by iterations-to-1e-4 and reports whether the
/// extra-vs-harnessing ordering flips between the largest and smallest step.
inline std::string ordering_report(const ResultTable& table) {
  std::ostringstream out;
  // group cells by alpha label, preserving first-seen order
  std::vector<std::string> alpha_labels;
  std::map<std::string, double> alpha_value;
  for (const auto& c : table.cells)
    if (!alpha_value.count(c.alpha_label)) {
      alpha_labels.push_back(c.alpha_label);
      alpha_value[c.alpha_label] = c.alpha;
    }
  auto cell_for = [&](const std::string& method, const std::string& alpha) -> const CellResult* {
    for (const auto& c : table.cells)
      if (c.method_label == method && c.alpha_label == alpha) return &c;
    return nullptr;
  };
  auto rank_key = [](const CellResult& c) {
    // cells that reached the threshold rank first, then by terminal error
    return c.iters_to_1e4 >= 0 ? static_cast<double>(c.iters_to_1e4)
                               : 1e18 * std::max(c.terminal_error, 1e-300);
  };
  for (const auto& al : alpha_labels) {
    std::vector<const CellResult*> group;
    for (const auto& c : table.cells)
      if (c.alpha_label == al) group.push_back(&c);
    std::stable_sort(group.begin(), group.end(),
                     [&](const CellResult* a, const CellResult* b) { return rank_key(*a) < rank_key(*b); });
    out << "alpha " << al << ": ";
    for (std::size_t i = 0; i < group.size(); ++i) {
      out << (i ? " < " : "") << group[i]->method_label << " (";
      if (group[i]->iters_to_1e4 >= 0)
        out << group[i]->iters_to_1e4 << " it to 1e-4";
      else
        out << "1e-4 not reached, terminal " << group[i]->terminal_error;
      out << ")";
    }
    out << "\n";
  }
  // extra-vs-harnessing flip between the largest and smallest step size
  if (alpha_labels.size() < 2) {
    out << "extra-vs-harnessing flip: indeterminate (need >= 2 step sizes)\n";
    return out.str();
  }
  const std::string largest = *std::max_element(
      alpha_labels.begin(), alpha_labels.end(),
      [&](const std::string& a, const std::string& b) { return alpha_value[a] < alpha_value[b]; });
  const std::string smallest = *std::min_element(
      alpha_labels.begin(), alpha_labels.end(),
      [&](const std::string& a, const std::string& b) { return alpha_value[a] < alpha_value[b]; });
  const CellResult* e_big = cell_for("extra", largest);
  const CellResult* h_big = cell_for("harnessing", largest);
  const CellResult* e_small = cell_for("extra", smallest);
  const CellResult* h_small = cell_for("harnessing", smallest);
  if (!e_big || !h_big || !e_small || !h_small) {
    out << "extra-vs-harnessing flip: indeterminate (methods missing)\n";
    return out.str();
  }
  const double big_gap = rank_key(*e_big) - rank_key(*h_big);
  const double small_gap = rank_key(*e_small) - rank_key(*h_small);
  const double rel_small = std::abs(small_gap) /
                           std::max(1.0, std::min(rank_key(*e_small), rank_key(*h_small)));
  out << "extra-vs-harnessing at alpha " << largest << ": "
      << (big_gap < 0 ? "extra faster" : big_gap > 0 ? "harnessing faster" : "tied") << "; at alpha "
      << smallest << ": "
      << (small_gap < 0 ? "extra faster" : small_gap > 0 ? "harnessing faster" : "tied") << "; ";
  if (big_gap * small_gap < 0)
    out << "ordering flips\n";
  else if (rel_small <= 0.05)
    out << "no flip, but within 5% at the small step\n";
  else
    out << "no flip\n";
  return out.str();
}

}  // namespace distopt
