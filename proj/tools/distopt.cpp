// Command-line front end: experiment runner, parameter tuning, error-dynamics
// diagnostics, and dataset generation.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "distopt/distopt.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace distopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitAllDiverged = 2;

struct RunArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> iters;
  std::string methods;
  std::string alphas;
  std::string data_file;
  std::string graph_file;
  std::string generate_data_path;
  bool print_config = false;
  bool provable_step = false;
};

ExperimentConfig load_config(const RunArgs& args) {
  ExperimentConfig cfg = parse_config_file(args.config_path);
  if (!args.out_dir.empty()) cfg.out = args.out_dir;
  if (args.seed) cfg.graph_seed = *args.seed;
  if (args.iters) cfg.iters = *args.iters;
  if (!args.data_file.empty()) cfg.data_file = args.data_file;
  if (!args.graph_file.empty()) cfg.graph_file = args.graph_file;
  if (args.provable_step) cfg.provable_step = true;
  if (!args.methods.empty()) {
    cfg.methods.clear();
    for (const auto& tok : detail::split_list(args.methods))
      cfg.methods.push_back(parse_method_token(tok));
  }
  if (!args.alphas.empty()) {
    cfg.alphas.clear();
    for (const auto& tok : detail::split_list(args.alphas))
      cfg.alphas.push_back(parse_step_size(tok));
  }
  if (cfg.methods.empty()) throw ConfigError("config: no methods selected");
  if (cfg.alphas.empty() && !cfg.provable_step) throw ConfigError("config: no step sizes selected");
  return cfg;
}

int cmd_run(const RunArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  if (args.print_config) {
    std::cout << render_config(cfg);
    return kExitOk;
  }
  if (!args.generate_data_path.empty()) {
    if (cfg.problem != ProblemKind::Logistic)
      throw ConfigError("--generate-data needs a logistic problem");
    const GeneratedLogistic gen = generate_logistic_data(
        cfg.n, cfg.samples_per_node, cfg.d, cfg.noise_variance, cfg.data_seed, cfg.reg);
    std::ofstream out(args.generate_data_path);
    if (!out) throw ConfigError("cannot open '" + args.generate_data_path + "' for writing");
    write_dataset_csv(gen.spec, out);
    std::cout << "wrote dataset to " << args.generate_data_path << "\n";
    return kExitOk;
  }
  const ResultTable table = run_experiment(cfg);
  fs::create_directories(cfg.out);
  {
    std::ofstream csv(fs::path(cfg.out) / "results.csv");
    write_csv(table, csv);
  }
  write_plot_files(table, cfg.out);
  {
    std::ofstream summary(fs::path(cfg.out) / "summary.txt");
    write_summary(table, summary);
    summary << "\n" << ordering_report(table);
  }
  write_summary(table, std::cout);
  std::cout << "\n" << ordering_report(table);
  std::cout << "results written to " << cfg.out << "\n";
  const bool all_diverged =
      std::all_of(table.cells.begin(), table.cells.end(), [](const CellResult& c) { return c.diverged; });
  return all_diverged ? kExitAllDiverged : kExitOk;
}

int cmd_tune(double mu, double lip, double sigma, std::optional<double> lambda_min,
             std::optional<double> b_opt) {
  std::cout << "b*  (scaled identity) = " << tune_b_star(mu, lip) << "\n";
  if (lambda_min) {
    if (*lambda_min > 0.0)
      std::cout << "b'  (scaled weight)   = " << tune_b_prime(mu, lip, *lambda_min) << "\n";
    else
      std::cout << "b'  (scaled weight)   = n/a for lambda_N <= 0; heuristic b' = L = " << lip
                << "\n";
  } else {
    std::cout << "b'  (scaled weight)   = needs --lambda-min; heuristic b' = L = " << lip << "\n";
  }
  const double b = b_opt ? *b_opt : tune_b_star(mu, lip);
  const double amax = max_step_bound(mu, lip, sigma, b);
  std::cout << "b in use              = " << b << "\n";
  std::cout << "alpha_max (provable)  = " << amax << "\n";
  const SmallGainReport rep = small_gain_check(mu, lip, sigma, 0.9 * amax, b);
  std::cout << "at alpha = 0.9 alpha_max: gamma1 = " << rep.gamma1 << ", gamma2 = " << rep.gamma2
            << ", product = " << rep.product << (rep.satisfied ? " (< 1)" : " (>= 1!)") << "\n";
  return kExitOk;
}

int cmd_diag(const std::string& config_path, int iters_cap, const std::string& out_path) {
  ExperimentConfig cfg = parse_config_file(config_path);
  const Instance inst = build_instance(cfg);
  const double mu = inst.problem.mu(), lip = inst.problem.lip(), sigma = inst.weight.sigma;

  // first cell that maps onto the generalized family
  const MethodEntry* entry = nullptr;
  for (const auto& m : cfg.methods)
    if (m.method != Method::Dgm) {
      entry = &m;
      break;
    }
  if (!entry) throw ConfigError("diag: needs at least one non-dgm method");
  if (cfg.alphas.empty()) throw ConfigError("diag: needs a step size");
  const double alpha = cfg.alphas[0].resolve(lip);
  BMatrixSpec b_spec = BMatrixSpec::zero();
  std::string note;
  if (entry->method == Method::Extra)
    b_spec = BMatrixSpec::w_over_alpha();
  else if (entry->method == Method::Generalized)
    b_spec = resolve_b_token(entry->b_token, mu, lip, inst.weight, &note);

  const int iters = std::min(cfg.iters, iters_cap);
  const Trajectory traj = run(Method::Generalized, {alpha, b_spec, inst.weight}, inst.problem,
                              Eigen::VectorXd::Zero(inst.problem.d()), iters, inst.x_star,
                              {/*record_iterates=*/true, /*record_aux=*/true});

  const double l_prime = b_spec.kind == BMatrixSpec::Kind::Zero ||
                                 b_spec.kind == BMatrixSpec::Kind::ScaledIdentity
                             ? shifted_gradient_lipschitz(mu, lip, b_spec.value)
                             : lip + b_norm(b_spec, alpha);
  const SmallGainReport gain = small_gain_check_with_lprime(mu, lip, sigma, alpha, l_prime);

  const StackedPoint rep_star = inst.x_star.transpose().replicate(inst.problem.n(), 1);
  const BlockDiagonal h_star = integrated_hessian(inst.problem, rep_star, inst.x_star);
  const double rho = spectral_radius(build_error_matrix(inst.weight, alpha, b_spec, h_star));

  json report;
  report["method"] = entry->label;
  report["alpha"] = alpha;
  report["gamma1"] = gain.gamma1;
  report["gamma2"] = gain.gamma2;
  report["product"] = gain.product;
  report["gain_satisfied"] = gain.satisfied;
  report["alpha_max"] = max_step_bound(mu, lip, sigma, b_spec, alpha);
  report["spectral_radius"] = rho;
  if (b_spec.kind != BMatrixSpec::Kind::Generic)
    report["block21_norm"] = block21_norm(b_spec, mu, lip, inst.weight, alpha);
  report["error_recursion_max_residual"] =
      error_recursion_max_residual(traj, inst.problem, inst.x_star, inst.weight, alpha, b_spec);
  report["mu"] = mu;
  report["lip"] = lip;
  report["sigma"] = sigma;
  report["lambda_min"] = inst.weight.lambda_min;
  report["diverged"] = traj.diverged;
  if (!note.empty()) report["note"] = note;

  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot open '" + out_path + "' for writing");
    out << text;
    std::cout << "diagnostic report written to " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_gen_data(int n, int samples, int d, double noise_variance, std::uint64_t seed, double reg,
                 const std::string& out_path) {
  const GeneratedLogistic gen = generate_logistic_data(n, samples, d, noise_variance, seed, reg);
  std::ofstream out(out_path);
  if (!out) throw ConfigError("cannot open '" + out_path + "' for writing");
  write_dataset_csv(gen.spec, out);
  std::cout << "wrote " << n * samples << " samples to " << out_path << "\n";
  std::cout << "planted vector: " << gen.planted.transpose() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed first-order optimization simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
  run_cmd->add_option("--config", run_args.config_path, "experiment config file")->required();
  run_cmd->add_option("--out", run_args.out_dir, "output directory (overrides config)");
  run_cmd->add_option("--seed", run_args.seed, "graph seed (overrides config)");
  run_cmd->add_option("--iters", run_args.iters, "iteration budget (overrides config)");
  run_cmd->add_option("--methods", run_args.methods, "comma list of methods (overrides config)");
  run_cmd->add_option("--alphas", run_args.alphas, "comma list of step sizes (overrides config)");
  run_cmd->add_option("--data-file", run_args.data_file, "dataset CSV to ingest");
  run_cmd->add_option("--graph-file", run_args.graph_file, "edge-list file instead of a random draw");
  run_cmd->add_option("--generate-data", run_args.generate_data_path,
                      "write the generated dataset CSV and exit");
  run_cmd->add_flag("--print-config", run_args.print_config, "echo the resolved config and exit");
  run_cmd->add_flag("--provable-step", run_args.provable_step,
                    "use 0.9x the provable step-size bound per method");

  double mu = 0, lip = 0, sigma = 0;
  std::optional<double> lambda_min, b_opt;
  CLI::App* tune_cmd = app.add_subcommand("tune", "print b*, b', alpha_max and the gain product");
  tune_cmd->add_option("--mu", mu, "strong convexity constant")->required();
  tune_cmd->add_option("--lip", lip, "gradient Lipschitz constant")->required();
  tune_cmd->add_option("--sigma", sigma, "weight-matrix mixing parameter")->required();
  tune_cmd->add_option("--lambda-min", lambda_min, "smallest weight-matrix eigenvalue");
  tune_cmd->add_option("--b", b_opt, "scaled-identity parameter (default b*)");

  std::string diag_config, diag_out;
  int diag_iters = 300;
  CLI::App* diag_cmd = app.add_subcommand("diag", "error-dynamics and small-gain JSON report");
  diag_cmd->add_option("--config", diag_config, "experiment config file")->required();
  diag_cmd->add_option("--iters", diag_iters, "iteration cap for the recursion residual");
  diag_cmd->add_option("--out", diag_out, "write the JSON report here instead of stdout");

  int gen_n = 30, gen_samples = 2, gen_d = 6;
  double gen_noise = 0.4, gen_reg = 0.03;
  std::uint64_t gen_seed = 7;
  std::string gen_out;
  CLI::App* gen_cmd = app.add_subcommand("gen-data", "generate a synthetic dataset CSV");
  gen_cmd->add_option("--n", gen_n, "node count");
  gen_cmd->add_option("--samples", gen_samples, "samples per node");
  gen_cmd->add_option("--d", gen_d, "decision dimension (features + intercept)");
  gen_cmd->add_option("--noise-variance", gen_noise, "label noise variance");
  gen_cmd->add_option("--seed", gen_seed, "data seed");
  gen_cmd->add_option("--reg", gen_reg, "l2 regularization R");
  gen_cmd->add_option("--out", gen_out, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (run_cmd->parsed()) return cmd_run(run_args);
    if (tune_cmd->parsed()) return cmd_tune(mu, lip, sigma, lambda_min, b_opt);
    if (diag_cmd->parsed()) return cmd_diag(diag_config, diag_iters, diag_out);
    if (gen_cmd->parsed())
      return cmd_gen_data(gen_n, gen_samples, gen_d, gen_noise, gen_seed, gen_reg, gen_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}
