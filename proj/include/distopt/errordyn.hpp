#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "distopt/methods.hpp"
#include "distopt/problem.hpp"
#include "distopt/weights.hpp"

namespace distopt {

// M is 2 Nd x 2 Nd dense; diagnostics are desk-scale by design.
inline constexpr int kDenseDimensionCeiling = 1024;

namespace detail {

inline void check_desk_scale(Eigen::Index nd) {
  if (nd > kDenseDimensionCeiling)
    throw std::invalid_argument("error dynamics: Nd exceeds the dense ceiling of " +
                                std::to_string(kDenseDimensionCeiling));
}

// A (N x N) Kronecker I_d, materialized
inline Eigen::MatrixXd kron_identity(const Eigen::MatrixXd& a, int d) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * d, n * d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * d, j * d, d, d) = a(i, j) * Eigen::MatrixXd::Identity(d, d);
  return out;
}

// 16-point Gauss-Legendre rule on [-1, 1] (positive half; the rule is symmetric)
struct GaussLegendre16 {
  static constexpr std::array<double, 8> nodes = {
      0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
      0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
  static constexpr std::array<double, 8> weights = {
      0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
      0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
};

}  // namespace detail

/// Nd x Nd block-diagonal matrix held as its d x d diagonal blocks.
struct BlockDiagonal {
  std::vector<Eigen::MatrixXd> blocks;

  Eigen::MatrixXd dense() const {
    const int d = blocks.empty() ? 0 : static_cast<int>(blocks[0].rows());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(blocks.size() * d, blocks.size() * d);
    for (std::size_t i = 0; i < blocks.size(); ++i) out.block(i * d, i * d, d, d) = blocks[i];
    return out;
  }
};

/// Block i = integral over t in [0,1] of hess f_i(x_star + t (x_i - x_star)),
/// by composite 16-point Gauss-Legendre quadrature (4 panels by default,
/// calibrated by the mean-value identity test). Quadratic problems have a
/// constant Hessian and bypass the quadrature.
inline BlockDiagonal integrated_hessian(const Problem& p, const StackedPoint& x,
                                        const Eigen::VectorXd& x_star, int panels = 4) {
  if (x.rows() != p.n() || x.cols() != p.d())
    throw std::invalid_argument("integrated_hessian: x must be N x d");
  if (panels < 1) throw std::invalid_argument("integrated_hessian: panels must be >= 1");
  BlockDiagonal h;
  h.blocks.reserve(p.n());
  for (int i = 0; i < p.n(); ++i) {
    if (p.is_quadratic()) {
      h.blocks.push_back(p.local_hessian(i, x_star));
      continue;
    }
    const Eigen::VectorXd delta = x.row(i).transpose() - x_star;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(p.d(), p.d());
    const double width = 1.0 / panels;
    for (int panel = 0; panel < panels; ++panel) {
      const double mid = (panel + 0.5) * width;
      for (std::size_t q = 0; q < detail::GaussLegendre16::nodes.size(); ++q) {
        const double offset = 0.5 * width * detail::GaussLegendre16::nodes[q];
        const double wq = 0.5 * width * detail::GaussLegendre16::weights[q];
        acc += wq * p.local_hessian(i, x_star + (mid + offset) * delta);
        acc += wq * p.local_hessian(i, x_star + (mid - offset) * delta);
      }
    }
    h.blocks.push_back(std::move(acc));
  }
  return h;
}

/// Primal/dual error split against the reference solution:
///   e_x = x_tilde + 1 (x) e_bar_x,   e_u = u_tilde + 1 (x) e_bar_u.
struct ErrorDecomposition {
  StackedPoint e_x;       // x - 1 (x) x_star
  StackedPoint e_u;       // u + grad F(1 (x) x_star)
  StackedPoint x_tilde;   // x - 1 (x) xbar
  StackedPoint u_tilde;   // (I - J) e_u
  Eigen::VectorXd e_bar_x;  // xbar - x_star
  Eigen::VectorXd e_bar_u;  // column average of e_u
};

inline ErrorDecomposition decompose(const StackedPoint& x, const StackedPoint& u,
                                    const Eigen::VectorXd& x_star, const Problem& p) {
  if (x.rows() != p.n() || x.cols() != p.d() || u.rows() != p.n() || u.cols() != p.d())
    throw std::invalid_argument("decompose: x and u must be N x d");
  ErrorDecomposition out;
  const StackedPoint x_bullet = x_star.transpose().replicate(p.n(), 1);
  out.e_x = x - x_bullet;
  out.e_u = u + p.stacked_grad(x_bullet);
  const Eigen::RowVectorXd xbar = x.colwise().mean();
  out.x_tilde = x.rowwise() - xbar;
  out.e_bar_x = xbar.transpose() - x_star;
  const Eigen::RowVectorXd ubar = out.e_u.colwise().mean();
  out.u_tilde = out.e_u.rowwise() - ubar;
  out.e_bar_u = ubar.transpose();
  return out;
}

/// Materializes B per spec as an Nd x Nd matrix (desk scale only).
inline Eigen::MatrixXd materialize_b(const BMatrixSpec& spec, const WeightMatrix& w, double alpha,
                                     int d) {
  const Eigen::Index nd = static_cast<Eigen::Index>(w.n()) * d;
  detail::check_desk_scale(nd);
  switch (spec.kind) {
    case BMatrixSpec::Kind::Zero: return Eigen::MatrixXd::Zero(nd, nd);
    case BMatrixSpec::Kind::ScaledIdentity:
      return spec.value * Eigen::MatrixXd::Identity(nd, nd);
    case BMatrixSpec::Kind::ScaledWeight: return spec.value * detail::kron_identity(w.w, d);
    case BMatrixSpec::Kind::WOverAlpha: return detail::kron_identity(w.w, d) / alpha;
    case BMatrixSpec::Kind::Generic:
      if (spec.generic.rows() != nd)
        throw std::invalid_argument("materialize_b: generic B has wrong dimension");
      return spec.generic;
  }
  throw std::logic_error("materialize_b: unreachable");
}

/// The 2x2-block matrix driving the joint primal-dual error recursion:
///   [ W - alpha H      -alpha I ]
///   [ (W - I)(H - B)   W - J    ]
struct ErrorDynamicsMatrix {
  Eigen::MatrixXd m;
  double alpha = 0.0;
  BMatrixSpec b_spec;
};

inline ErrorDynamicsMatrix build_error_matrix(const WeightMatrix& w, double alpha,
                                              const BMatrixSpec& b_spec, const BlockDiagonal& h) {
  const int d = h.blocks.empty() ? 0 : static_cast<int>(h.blocks[0].rows());
  if (static_cast<int>(h.blocks.size()) != w.n())
    throw std::invalid_argument("build_error_matrix: H block count must equal N");
  const Eigen::Index nd = static_cast<Eigen::Index>(w.n()) * d;
  detail::check_desk_scale(nd);
  const Eigen::MatrixXd big_w = detail::kron_identity(w.w, d);
  const Eigen::MatrixXd big_j =
      detail::kron_identity(Eigen::MatrixXd::Constant(w.n(), w.n(), 1.0 / w.n()), d);
  const Eigen::MatrixXd hd = h.dense();
  const Eigen::MatrixXd bd = materialize_b(b_spec, w, alpha, d);
  ErrorDynamicsMatrix out;
  out.alpha = alpha;
  out.b_spec = b_spec;
  out.m.resize(2 * nd, 2 * nd);
  out.m.topLeftCorner(nd, nd) = big_w - alpha * hd;
  out.m.topRightCorner(nd, nd) = -alpha * Eigen::MatrixXd::Identity(nd, nd);
  out.m.bottomLeftCorner(nd, nd) = (big_w - Eigen::MatrixXd::Identity(nd, nd)) * (hd - bd);
  out.m.bottomRightCorner(nd, nd) = big_w - big_j;
  return out;
}

inline double spectral_radius(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral_radius: eigensolver did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline double spectral_radius(const ErrorDynamicsMatrix& m) { return spectral_radius(m.m); }

/// Worst case (2,1)-block driver norm over mu I <= H <= L I:
/// max{|b - mu|, |L - b|} for b I (exact sup), the upper bound
/// max{|b' - mu|, |L - b' lambda_N|} for b' W.
inline double block21_norm(const BMatrixSpec& spec, double mu, double lip, const WeightMatrix& w,
                           double alpha = 0.0) {
  switch (spec.kind) {
    case BMatrixSpec::Kind::Zero: return std::max(mu, lip);  // = lip
    case BMatrixSpec::Kind::ScaledIdentity:
      return std::max(std::abs(spec.value - mu), std::abs(lip - spec.value));
    case BMatrixSpec::Kind::ScaledWeight:
      return std::max(std::abs(spec.value - mu), std::abs(lip - spec.value * w.lambda_min));
    case BMatrixSpec::Kind::WOverAlpha: {
      if (!(alpha > 0.0)) throw std::invalid_argument("block21_norm: W/alpha needs alpha > 0");
      const double bp = 1.0 / alpha;
      return std::max(std::abs(bp - mu), std::abs(lip - bp * w.lambda_min));
    }
    case BMatrixSpec::Kind::Generic:
      throw std::invalid_argument("block21_norm: no closed form for generic B");
  }
  throw std::logic_error("block21_norm: unreachable");
}

/// delta-norms ||a||^{delta,K} = max_{k<=K} delta^{-k} ||a^(k)|| for the
/// x_tilde, e_bar_x and u_tilde error sequences of a recorded trajectory.
/// Values can reach +inf when a sequence decays slower than delta.
struct DeltaNormReport {
  double delta = 0.0;
  std::vector<double> x_tilde;
  std::vector<double> e_bar_x;
  std::vector<double> u_tilde;
  bool x_tilde_bounded = false;
  bool e_bar_x_bounded = false;
  bool u_tilde_bounded = false;
};

namespace detail {

inline std::pair<std::vector<double>, bool> running_delta_norm(const std::vector<double>& norms,
                                                               double delta) {
  std::vector<double> out;
  out.reserve(norms.size());
  double best = 0.0;
  for (std::size_t k = 0; k < norms.size(); ++k) {
    const double scaled =
        norms[k] == 0.0 ? 0.0 : std::exp(std::log(norms[k]) - static_cast<double>(k) * std::log(delta));
    best = std::max(best, scaled);
    out.push_back(best);
  }
  // bounded if no new maximum appears over the final third
  bool bounded = true;
  if (!out.empty()) {
    const std::size_t split = out.size() - out.size() / 3;
    bounded = out.back() <= out[split > 0 ? split - 1 : 0] * (1.0 + 1e-12);
  }
  return {std::move(out), bounded};
}

}  // namespace detail

inline DeltaNormReport delta_norms(const Trajectory& traj, const Problem& p,
                                   const Eigen::VectorXd& x_star, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("delta_norms: delta must be in (0,1)");
  if (traj.xs.empty() || traj.aux.size() != traj.xs.size())
    throw std::invalid_argument("delta_norms: trajectory must carry x and u snapshots");
  std::vector<double> nx, nbar, nu;
  for (std::size_t k = 0; k < traj.xs.size(); ++k) {
    const ErrorDecomposition e = decompose(traj.xs[k], traj.aux[k], x_star, p);
    nx.push_back(e.x_tilde.norm());
    nbar.push_back(e.e_bar_x.norm());
    nu.push_back(e.u_tilde.norm());
  }
  DeltaNormReport rep;
  rep.delta = delta;
  std::tie(rep.x_tilde, rep.x_tilde_bounded) = detail::running_delta_norm(nx, delta);
  std::tie(rep.e_bar_x, rep.e_bar_x_bounded) = detail::running_delta_norm(nbar, delta);
  std::tie(rep.u_tilde, rep.u_tilde_bounded) = detail::running_delta_norm(nu, delta);
  return rep;
}

/// Gains of the two coupled delta-norm bounds in the small-gain certificate
/// of the R-linear rate. gamma1 gamma2 < 1 holds exactly when alpha is below
/// the second term of the provable step bound.
struct SmallGainReport {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double product = 0.0;
  bool satisfied = false;
};

inline SmallGainReport small_gain_check_with_lprime(double mu, double lip, double sigma,
                                                    double alpha, double l_prime) {
  if (!(mu > 0.0) || mu > lip) throw std::invalid_argument("small_gain_check: need 0 < mu <= lip");
  if (sigma < 0.0 || sigma >= 1.0)
    throw std::invalid_argument("small_gain_check: need sigma in [0,1)");
  if (!(alpha > 0.0)) throw std::invalid_argument("small_gain_check: need alpha > 0");
  SmallGainReport rep;
  rep.gamma1 = (24.0 / 5.0) * alpha / (1.0 - sigma);
  rep.gamma2 = 40.0 * l_prime * lip / (mu * (1.0 - sigma));
  rep.product = rep.gamma1 * rep.gamma2;
  rep.satisfied = rep.product < 1.0;
  return rep;
}

inline SmallGainReport small_gain_check(double mu, double lip, double sigma, double alpha,
                                        double b) {
  return small_gain_check_with_lprime(mu, lip, sigma, alpha, shifted_gradient_lipschitz(mu, lip, b));
}

/// Runs y <- y - gamma (grad phi(y) + eps_k) on the quadratic
/// phi(y) = 1/2 y'A y + c'y and asserts the inexact-gradient contraction
///   ||y_next - y*|| <= (1 - gamma m) ||y - y*|| + gamma ||eps_k||
/// at every step. Returns whether the bound held throughout.
inline bool inexact_gradient_bound_check(const Eigen::MatrixXd& a, const Eigen::VectorXd& c,
                                         double gamma, const std::vector<Eigen::VectorXd>& noise,
                                         const Eigen::VectorXd& y0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const double m = es.eigenvalues().minCoeff();
  const double big_m = es.eigenvalues().maxCoeff();
  if (!(m > 0.0)) throw std::invalid_argument("inexact_gradient_bound_check: A must be SPD");
  if (!(gamma > 0.0) || gamma > 1.0 / big_m)
    throw std::invalid_argument("inexact_gradient_bound_check: need 0 < gamma <= 1/M");
  const Eigen::VectorXd y_star = a.ldlt().solve(-c);
  Eigen::VectorXd y = y0;
  for (const auto& eps : noise) {
    const Eigen::VectorXd y_next = y - gamma * (a * y + c + eps);
    const double lhs = (y_next - y_star).norm();
    const double rhs = (1.0 - gamma * m) * (y - y_star).norm() + gamma * eps.norm();
    if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) return false;
    y = y_next;
  }
  return true;
}

/// Symmetric PSD square root via eigendecomposition; eigenvalues in
/// [-1e-10, 0) are clamped to zero, anything more negative is an error.
inline Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || (m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("matrix_sqrt_psd: symmetric matrix required");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("matrix_sqrt_psd: eigensolver did not converge");
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-10)
      throw std::invalid_argument("matrix_sqrt_psd: significantly negative eigenvalue " +
                                  std::to_string(ev(i)));
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

/// Desk-scale diagnostic: the mu-variable primal-dual form of the method,
/// which carries the dual iterate through L^{1/2}:
///   x <- W x - alpha grad F(x) - L^{1/2} mu
///   mu <- mu + L^{1/2} x_new - (W - alpha B) L^{1/2} x_old
/// Returns the x iterates (including the start) for cross-form comparison.
inline std::vector<StackedPoint> run_mu_form(const WeightMatrix& w, const Problem& p, double alpha,
                                             const BMatrixSpec& b_spec, const Eigen::VectorXd& x0,
                                             int iters) {
  const Eigen::Index nd = static_cast<Eigen::Index>(p.n()) * p.d();
  detail::check_desk_scale(nd);
  const Eigen::MatrixXd big_w = detail::kron_identity(w.w, p.d());
  const Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(nd, nd) - big_w;
  const Eigen::MatrixXd sqrt_lap = matrix_sqrt_psd(lap);
  const Eigen::MatrixXd past = big_w - alpha * materialize_b(b_spec, w, alpha, p.d());
  Eigen::VectorXd x = detail::to_vector(x0.transpose().replicate(p.n(), 1));
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(nd);
  std::vector<StackedPoint> out;
  out.push_back(detail::from_vector(x, p.n(), p.d()));
  for (int k = 0; k < iters; ++k) {
    const Eigen::VectorXd g = detail::to_vector(p.stacked_grad(detail::from_vector(x, p.n(), p.d())));
    const Eigen::VectorXd x_new = big_w * x - alpha * g - sqrt_lap * mu;
    mu += sqrt_lap * x_new - past * (sqrt_lap * x);
    x = x_new;
    out.push_back(detail::from_vector(x, p.n(), p.d()));
  }
  return out;
}

/// Max over the trajectory of || e^(k+1) - M_k e^(k) || with H_k rebuilt at
/// every iterate; checks that a run actually follows the error recursion.
inline double error_recursion_max_residual(const Trajectory& traj, const Problem& p,
                                           const Eigen::VectorXd& x_star, const WeightMatrix& w,
                                  double alpha, const BMatrixSpec& b_spec) {
  if (traj.xs.size() < 2 || traj.aux.size() != traj.xs.size())
    throw std::invalid_argument("error_recursion_max_residual: trajectory must carry x and u snapshots");
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < traj.xs.size(); ++k) {
    const ErrorDecomposition now = decompose(traj.xs[k], traj.aux[k], x_star, p);
    const ErrorDecomposition next = decompose(traj.xs[k + 1], traj.aux[k + 1], x_star, p);
    const BlockDiagonal h = integrated_hessian(p, traj.xs[k], x_star);
    const ErrorDynamicsMatrix m = build_error_matrix(w, alpha, b_spec, h);
    Eigen::VectorXd e_now(2 * now.e_x.size());
    e_now << detail::to_vector(now.e_x), detail::to_vector(now.e_u);
    Eigen::VectorXd e_next(2 * next.e_x.size());
    e_next << detail::to_vector(next.e_x), detail::to_vector(next.e_u);
    worst = std::max(worst, (e_next - m.m * e_now).norm());
  }
  return worst;
}

}  // namespace distopt
