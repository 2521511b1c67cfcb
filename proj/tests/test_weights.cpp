#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "distopt/graph.hpp"
#include "distopt/weights.hpp"

using namespace distopt;

TEST_CASE("metropolis weights on the 2-node graph") {
  const WeightMatrix w = metropolis_weights(Graph(2, {{0, 1}}));
  CHECK(w.w(0, 0) == Catch::Approx(0.75).margin(1e-15));
  CHECK(w.w(0, 1) == Catch::Approx(0.25).margin(1e-15));
  CHECK(w.w(1, 1) == Catch::Approx(0.75).margin(1e-15));
  CHECK(w.lambda_2 == Catch::Approx(0.5).margin(1e-12));
  CHECK(w.sigma == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("metropolis weights on the complete 3-node graph") {
  const WeightMatrix w = metropolis_weights(Graph(3, {{0, 1}, {1, 2}, {0, 2}}));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(w.w(i, j) == Catch::Approx(i == j ? 2.0 / 3.0 : 1.0 / 6.0).margin(1e-15));
  CHECK(w.sigma == Catch::Approx(0.5).margin(1e-12));
  CHECK(w.lambda_min == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("metropolis weights reject disconnected graphs") {
  CHECK_THROWS_AS(metropolis_weights(Graph(4, {{0, 1}, {2, 3}})), std::invalid_argument);
}

TEST_CASE("spectral_info on ideal consensus and identity matrices") {
  const int n = 6;
  const Eigen::MatrixXd j = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const SpectralInfo sj = spectral_info(j);
  CHECK(sj.lambda_2 == Catch::Approx(0.0).margin(1e-12));
  CHECK(sj.lambda_min == Catch::Approx(0.0).margin(1e-12));
  CHECK(sj.sigma == Catch::Approx(0.0).margin(1e-12));
  const SpectralInfo si = spectral_info(Eigen::MatrixXd::Identity(n, n));
  CHECK(si.lambda_2 == Catch::Approx(1.0));  // flags a disconnected topology
  CHECK(si.sigma == Catch::Approx(1.0));
}

TEST_CASE("spectral_info rejects non-symmetric and non-stochastic input") {
  Eigen::MatrixXd m(2, 2);
  m << 0.5, 0.5, 0.25, 0.75;
  CHECK_THROWS_AS(spectral_info(m), std::invalid_argument);
  Eigen::MatrixXd s(2, 2);
  s << 0.6, 0.5, 0.5, 0.6;
  CHECK_THROWS_AS(spectral_info(s), std::invalid_argument);
}

TEST_CASE("generated weight matrices satisfy the invariants") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    Graph g = random_geometric(20, 0.45, rng());
    while (!is_connected(g)) g = random_geometric(20, 0.45, rng());
    const WeightMatrix w = metropolis_weights(g);
    CHECK((w.w - w.w.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((w.w.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(w.sigma < 1.0);
    for (int i = 0; i < g.n; ++i) CHECK(w.w(i, i) > 0.0);
    std::vector<std::vector<char>> adj(g.n, std::vector<char>(g.n, 0));
    for (auto [i, j] : g.edges) adj[i][j] = adj[j][i] = 1;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) {
        if (i == j) continue;
        if (adj[i][j])
          CHECK(w.w(i, j) > 0.0);
        else
          CHECK(w.w(i, j) == 0.0);
      }
  }
}

TEST_CASE("consensus contraction: ||W z|| <= sigma ||z|| on the zero-mean subspace") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  Graph g = random_geometric(15, 0.5, 3);
  while (!is_connected(g)) g = random_geometric(15, 0.5, rng());
  const WeightMatrix w = metropolis_weights(g);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd z(g.n);
    for (int i = 0; i < g.n; ++i) z(i) = gauss(rng);
    z.array() -= z.mean();
    CHECK((w.w * z).norm() <= w.sigma * z.norm() + 1e-12);
  }
}

TEST_CASE("stochasticity lifted to block form: W (1 x y) = 1 x y") {
  const WeightMatrix w = metropolis_weights(Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}));
  Eigen::VectorXd y(3);
  y << 1.5, -2.0, 0.25;
  const Eigen::MatrixXd rep = y.transpose().replicate(4, 1);
  CHECK((w.mix(rep) - rep).cwiseAbs().maxCoeff() < 1e-14);
}
