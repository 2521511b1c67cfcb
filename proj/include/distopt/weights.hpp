#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "distopt/graph.hpp"

namespace distopt {

struct SpectralInfo {
  double sigma;        // max{lambda_2, -lambda_N}
  double lambda_min;   // lambda_N
  double lambda_2;     // second largest eigenvalue
};

/// Eigen-decomposes a symmetric row-stochastic matrix. The stochasticity
/// tolerance 1e-10 absorbs accumulated rounding in row sums.
inline SpectralInfo spectral_info(const Eigen::MatrixXd& w) {
  const auto n = w.rows();
  if (n != w.cols() || n < 1) throw std::invalid_argument("spectral_info: square matrix required");
  if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("spectral_info: matrix is not symmetric");
  if ((w.rowwise().sum().array() - 1.0).abs().maxCoeff() > 1e-10)
    throw std::invalid_argument("spectral_info: rows do not sum to 1");
  if (n == 1) return {0.0, 1.0, 0.0};  // W - J = 0; no secondary eigenvalue
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();  // ascending
  const double lambda_min = ev(0);
  const double lambda_2 = ev(n - 2);
  return {std::max(lambda_2, -lambda_min), lambda_min, lambda_2};
}

/// Symmetric doubly stochastic weight matrix respecting the graph sparsity,
/// with cached spectral quantities. sigma < 1 holds for connected graphs.
struct WeightMatrix {
  Eigen::MatrixXd w;
  double sigma = 0.0;
  double lambda_min = 1.0;
  double lambda_2 = 0.0;

  int n() const { return static_cast<int>(w.rows()); }

  /// W * x applied blockwise to an N x d stacked point (row i = node i's copy).
  Eigen::MatrixXd mix(const Eigen::MatrixXd& x) const { return w * x; }
};

/// W_ij = 1 / (2 (max{deg i, deg j} + 1)) on edges, diagonal fills the row to 1.
/// Degrees exclude the node itself.
inline WeightMatrix metropolis_weights(const Graph& g) {
  if (!is_connected(g))
    throw std::invalid_argument("metropolis_weights: graph must be connected (sigma would be 1)");
  const int n = g.n;
  auto deg = degrees(g);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : g.edges) {
    const double wij = 1.0 / (2.0 * (std::max(deg[i], deg[j]) + 1.0));
    w(i, j) = wij;
    w(j, i) = wij;
  }
  for (int i = 0; i < n; ++i) w(i, i) = 1.0 - (w.row(i).sum() - w(i, i));
  const SpectralInfo s = spectral_info(w);
  return {std::move(w), s.sigma, s.lambda_min, s.lambda_2};
}

}  // namespace distopt
