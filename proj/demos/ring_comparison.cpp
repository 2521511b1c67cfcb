// Runs the four methods on a small ring network with quadratic costs and
// prints iterations-to-threshold per method.

#include <cstdio>
#include <vector>

#include "distopt/distopt.hpp"

using namespace distopt;

int main() {
  const int n = 12, d = 3;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
  const Graph g(n, edges);
  const WeightMatrix w = metropolis_weights(g);

  const double mu = 1.0, lip = 8.0;
  const Problem problem = Problem::quadratic(random_quadratic(n, d, mu, lip, 42), mu, lip);
  const Eigen::VectorXd x_star = solve_reference(problem);
  const double alpha = 1.0 / (3.0 * lip);

  std::printf("ring n=%d, sigma=%.4f, lambda_N=%.4f, alpha=%.5f\n", n, w.sigma, w.lambda_min, alpha);
  struct Entry {
    const char* name;
    Method method;
    BMatrixSpec b;
  };
  const Entry entries[] = {
      {"dgm", Method::Dgm, BMatrixSpec::zero()},
      {"harnessing", Method::Harnessing, BMatrixSpec::zero()},
      {"extra", Method::Extra, BMatrixSpec::zero()},
      {"generalized bI:auto", Method::Generalized, BMatrixSpec::scaled_identity(tune_b_star(mu, lip))},
      {"generalized bW:L", Method::Generalized, BMatrixSpec::scaled_weight(lip)},
  };
  for (const auto& e : entries) {
    StepConfig cfg{alpha, e.b, w};
    Trajectory traj = run(e.method, cfg, problem, Eigen::VectorXd::Zero(d), 3000, x_star,
                          {/*record_iterates=*/false});
    long to4 = -1;
    for (std::size_t k = 0; k < traj.records.size(); ++k)
      if (traj.records[k].relative_error <= 1e-4) {
        to4 = static_cast<long>(k);
        break;
      }
    std::printf("%-22s to 1e-4: %5ld   terminal: %.3e\n", e.name, to4, traj.terminal_error());
  }
  return 0;
}
