#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "distopt/graph.hpp"
#include "distopt/problem.hpp"
#include "distopt/weights.hpp"

namespace distopt {

enum class Method { Dgm, Extra, Harnessing, Generalized };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::Dgm: return "dgm";
    case Method::Extra: return "extra";
    case Method::Harnessing: return "harnessing";
    case Method::Generalized: return "generalized";
  }
  return "?";
}

/// Weighting of the past dual gradient in the generalized update.
/// Zero recovers gradient tracking, WOverAlpha recovers Extra,
/// ScaledIdentity((mu+L)/2) is the minimax tuning.
struct BMatrixSpec {
  enum class Kind { Zero, ScaledIdentity, ScaledWeight, WOverAlpha, Generic };
  Kind kind = Kind::Zero;
  double value = 0.0;        // b for ScaledIdentity, b' for ScaledWeight
  Eigen::MatrixXd generic;   // Nd x Nd symmetric, graph block sparsity

  static BMatrixSpec zero() { return {}; }
  static BMatrixSpec scaled_identity(double b) {
    if (b < 0.0) throw std::invalid_argument("BMatrixSpec: b must be >= 0");
    return {Kind::ScaledIdentity, b, {}};
  }
  static BMatrixSpec scaled_weight(double bp) {
    if (bp < 0.0) throw std::invalid_argument("BMatrixSpec: b' must be >= 0");
    return {Kind::ScaledWeight, bp, {}};
  }
  static BMatrixSpec w_over_alpha() { return {Kind::WOverAlpha, 0.0, {}}; }
  static BMatrixSpec make_generic(Eigen::MatrixXd m) {
    return {Kind::Generic, 0.0, std::move(m)};
  }
};

namespace detail {

inline Eigen::VectorXd to_vector(const StackedPoint& x) {
  Eigen::VectorXd v(x.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i) v.segment(i * x.cols(), x.cols()) = x.row(i);
  return v;
}

inline StackedPoint from_vector(const Eigen::VectorXd& v, Eigen::Index n, Eigen::Index d) {
  StackedPoint x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) = v.segment(i * d, d);
  return x;
}

}  // namespace detail

/// B x for a stacked point, applied per spec variant.
inline StackedPoint apply_b(const BMatrixSpec& spec, const WeightMatrix& w, double alpha,
                            const StackedPoint& x) {
  switch (spec.kind) {
    case BMatrixSpec::Kind::Zero: return StackedPoint::Zero(x.rows(), x.cols());
    case BMatrixSpec::Kind::ScaledIdentity: return spec.value * x;
    case BMatrixSpec::Kind::ScaledWeight: return spec.value * (w.w * x);
    case BMatrixSpec::Kind::WOverAlpha: return (w.w * x) / alpha;
    case BMatrixSpec::Kind::Generic:
      if (spec.generic.rows() != x.size())
        throw std::invalid_argument("apply_b: generic B has wrong dimension");
      return detail::from_vector(spec.generic * detail::to_vector(x), x.rows(), x.cols());
  }
  throw std::logic_error("apply_b: unreachable");
}

/// Spectral norm of B, used by the generic-matrix step-size rule.
inline double b_norm(const BMatrixSpec& spec, double alpha) {
  switch (spec.kind) {
    case BMatrixSpec::Kind::Zero: return 0.0;
    case BMatrixSpec::Kind::ScaledIdentity: return spec.value;
    case BMatrixSpec::Kind::ScaledWeight: return spec.value;  // ||W|| = 1
    case BMatrixSpec::Kind::WOverAlpha: return 1.0 / alpha;
    case BMatrixSpec::Kind::Generic: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.generic, Eigen::EigenvaluesOnly);
      return es.eigenvalues().cwiseAbs().maxCoeff();
    }
  }
  throw std::logic_error("b_norm: unreachable");
}

/// Checks a generic B: symmetry, graph block sparsity, and that the consensus
/// subspace is an eigenspace (B (1 (x) y) = c (1 (x) y) with one scalar c,
/// probed on each basis vector e_k).
inline void validate_generic_b(const Eigen::MatrixXd& b, const Graph& g, int d,
                               double tol = 1e-10) {
  const Eigen::Index nd = static_cast<Eigen::Index>(g.n) * d;
  if (b.rows() != nd || b.cols() != nd)
    throw std::invalid_argument("validate_generic_b: wrong dimensions");
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("validate_generic_b: not symmetric");
  std::vector<std::vector<char>> adjacent(g.n, std::vector<char>(g.n, 0));
  for (auto [i, j] : g.edges) adjacent[i][j] = adjacent[j][i] = 1;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      if (i == j || adjacent[i][j]) continue;
      if (b.block(i * d, j * d, d, d).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("validate_generic_b: violates graph block sparsity");
    }
  double c = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXd rep = Eigen::VectorXd::Zero(nd);
    for (int i = 0; i < g.n; ++i) rep(i * d + k) = 1.0;
    const Eigen::VectorXd img = b * rep;
    const double ck = img.dot(rep) / g.n;
    if ((img - ck * rep).norm() > tol * std::max(1.0, img.norm()))
      throw std::invalid_argument("validate_generic_b: consensus vectors are not eigenvectors");
    if (std::isnan(c))
      c = ck;
    else if (std::abs(ck - c) > tol * std::max(1.0, std::abs(c)))
      throw std::invalid_argument("validate_generic_b: consensus eigenvalue differs across axes");
  }
}

struct StepConfig {
  double alpha = 0.0;
  BMatrixSpec b_spec;
  WeightMatrix weight;
};

struct AlgorithmState {
  Method method = Method::Dgm;
  int k = 0;
  StackedPoint x;
  StackedPoint u;          // generalized / primal-dual dual variable
  StackedPoint s;          // harnessing gradient tracker
  StackedPoint x_prev;     // extra history
  StackedPoint grad_prev;  // extra history
};

/// All methods start from the same estimate replicated across nodes;
/// u starts at zero and s at grad F(x0).
inline AlgorithmState make_state(Method method, const Problem& p, const StepConfig& cfg,
                                 const Eigen::VectorXd& x0) {
  if (x0.size() != p.d()) throw std::invalid_argument("make_state: x0 has wrong dimension");
  if (cfg.weight.n() != p.n()) throw std::invalid_argument("make_state: weight/problem mismatch");
  if (!(cfg.alpha > 0.0)) throw std::invalid_argument("make_state: alpha must be positive");
  AlgorithmState st;
  st.method = method;
  st.x = x0.transpose().replicate(p.n(), 1);
  if (method == Method::Generalized) st.u = StackedPoint::Zero(p.n(), p.d());
  if (method == Method::Harnessing) st.s = p.stacked_grad(st.x);
  return st;
}

/// x <- W x - alpha grad F(x)
inline AlgorithmState dgm_step(AlgorithmState st, const StepConfig& cfg, const Problem& p) {
  st.x = cfg.weight.w * st.x - cfg.alpha * p.stacked_grad(st.x);
  ++st.k;
  return st;
}

/// Two-term recursion with the one-step bootstrap x(1) = W x(0) - alpha grad F(x(0)).
inline AlgorithmState extra_step(AlgorithmState st, const StepConfig& cfg, const Problem& p) {
  const StackedPoint g = p.stacked_grad(st.x);
  StackedPoint next;
  if (st.k == 0)
    next = cfg.weight.w * st.x - cfg.alpha * g;
  else
    next = 2.0 * (cfg.weight.w * st.x) - cfg.alpha * g - cfg.weight.w * st.x_prev +
           cfg.alpha * st.grad_prev;
  st.x_prev = std::move(st.x);
  st.grad_prev = g;
  st.x = std::move(next);
  ++st.k;
  return st;
}

/// x <- W x - alpha s; s <- W s + grad F(x_new) - grad F(x_old)
inline AlgorithmState harnessing_step(AlgorithmState st, const StepConfig& cfg, const Problem& p) {
  const StackedPoint g_old = p.stacked_grad(st.x);
  st.x = cfg.weight.w * st.x - cfg.alpha * st.s;
  st.s = cfg.weight.w * st.s + p.stacked_grad(st.x) - g_old;
  ++st.k;
  return st;
}

/// Simultaneous update, both right-hand sides read iteration-k quantities:
///   x <- W x - alpha (grad F(x) + u)
///   u <- u - L (grad F(x) + u - B x),   L = I - W applied blockwise
inline AlgorithmState generalized_step(AlgorithmState st, const StepConfig& cfg, const Problem& p) {
  const StackedPoint g = p.stacked_grad(st.x);
  const StackedPoint v = g + st.u - apply_b(cfg.b_spec, cfg.weight, cfg.alpha, st.x);
  st.x = cfg.weight.w * st.x - cfg.alpha * (g + st.u);
  st.u += cfg.weight.w * v - v;
  ++st.k;
  return st;
}

/// Weight on the past dual gradient in the x(k+1)-dependent dual update.
enum class PastDualWeight { Zero, Weight, WeightMinusAlphaB };

/// Primal update as in the generalized method; dual update
///   u <- u + (1/alpha) L x_new - (1/alpha) P L x_old
/// with P = 0 (Extra form), P = W (harnessing form), or P = W - alpha B.
inline AlgorithmState primal_dual_u_step(AlgorithmState st, const StepConfig& cfg,
                                         const Problem& p, PastDualWeight past) {
  const StackedPoint g = p.stacked_grad(st.x);
  const StackedPoint x_new = cfg.weight.w * st.x - cfg.alpha * (g + st.u);
  const StackedPoint lap_new = x_new - cfg.weight.w * x_new;
  st.u += lap_new / cfg.alpha;
  if (past != PastDualWeight::Zero) {
    const StackedPoint lap_old = st.x - cfg.weight.w * st.x;
    st.u -= (cfg.weight.w * lap_old) / cfg.alpha;
    if (past == PastDualWeight::WeightMinusAlphaB)
      st.u += apply_b(cfg.b_spec, cfg.weight, cfg.alpha, lap_old);
  }
  st.x = x_new;
  ++st.k;
  return st;
}

inline AlgorithmState step(AlgorithmState st, const StepConfig& cfg, const Problem& p) {
  switch (st.method) {
    case Method::Dgm: return dgm_step(std::move(st), cfg, p);
    case Method::Extra: return extra_step(std::move(st), cfg, p);
    case Method::Harnessing: return harnessing_step(std::move(st), cfg, p);
    case Method::Generalized: return generalized_step(std::move(st), cfg, p);
  }
  throw std::logic_error("step: unreachable");
}

/// Minimax solution of min_b sup_H ||H - b I|| over mu I <= H <= L I.
inline double tune_b_star(double mu, double lip) {
  if (!(mu > 0.0) || mu > lip) throw std::invalid_argument("tune_b_star: need 0 < mu <= lip");
  return 0.5 * (mu + lip);
}

/// Sub-optimal scaled-weight tuning (L + mu)/(1 + lambda_N), valid for lambda_N > 0.
inline double tune_b_prime(double mu, double lip, double lambda_min) {
  if (!(mu > 0.0) || mu > lip) throw std::invalid_argument("tune_b_prime: need 0 < mu <= lip");
  if (!(lambda_min > 0.0))
    throw std::domain_error(
        "tune_b_prime: requires lambda_N > 0; use ScaledIdentity tuning or the heuristic b' = L");
  return (lip + mu) / (1.0 + lambda_min);
}

inline double shifted_gradient_lipschitz(double mu, double lip, double b) {
  return std::sqrt(std::max(lip * lip + b * b - 2.0 * b * mu, 0.0));
}

/// Step-size bound under which the R-linear rate is provable, for B = b I:
///   alpha < min{ (1-sigma) mu / (19 L^2), (1-sigma)^2 mu / (192 L' L) },
/// L' = sqrt(L^2 + b^2 - 2 b mu). L' = 0 drops the second term.
inline double max_step_bound(double mu, double lip, double sigma, double b) {
  if (!(mu > 0.0) || mu > lip) throw std::invalid_argument("max_step_bound: need 0 < mu <= lip");
  if (sigma < 0.0 || sigma >= 1.0)
    throw std::invalid_argument("max_step_bound: need sigma in [0,1)");
  const double lp = shifted_gradient_lipschitz(mu, lip, b);
  const double first = (1.0 - sigma) * mu / (19.0 * lip * lip);
  if (lp == 0.0) return first;
  const double second = (1.0 - sigma) * (1.0 - sigma) * mu / (192.0 * lp * lip);
  return std::min(first, second);
}

/// Same bound for an arbitrary B spec; non-identity variants use the
/// generic-matrix rule L' = L + ||B||. The W/alpha weighting needs the step
/// size it will run at, since ||B|| = 1/alpha.
inline double max_step_bound(double mu, double lip, double sigma, const BMatrixSpec& spec,
                             double alpha_for_w_over_alpha = 0.0) {
  if (spec.kind == BMatrixSpec::Kind::Zero) return max_step_bound(mu, lip, sigma, 0.0);
  if (spec.kind == BMatrixSpec::Kind::ScaledIdentity)
    return max_step_bound(mu, lip, sigma, spec.value);
  if (spec.kind == BMatrixSpec::Kind::WOverAlpha && !(alpha_for_w_over_alpha > 0.0))
    throw std::invalid_argument("max_step_bound: W/alpha weighting needs the running alpha");
  const double lp = lip + b_norm(spec, alpha_for_w_over_alpha);
  const double first = (1.0 - sigma) * mu / (19.0 * lip * lip);
  const double second = (1.0 - sigma) * (1.0 - sigma) * mu / (192.0 * lp * lip);
  return std::min(first, second);
}

struct TrajectoryRecord {
  int k = 0;
  double relative_error = 0.0;
  double consensus_residual = 0.0;
  double seconds = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  std::vector<StackedPoint> xs;    // iterate snapshots, aligned with records
  std::vector<StackedPoint> aux;   // u or s snapshots when requested
  bool diverged = false;
  std::string divergence_message;

  double terminal_error() const {
    return records.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : records.back().relative_error;
  }
};

struct RunOptions {
  bool record_iterates = true;
  bool record_aux = false;
};

/// (1/N) sum_i ||x_i - x_ref|| / ||x_ref||; falls back to the absolute error
/// when the reference is (numerically) zero.
inline double relative_error(const StackedPoint& x, const Eigen::VectorXd& x_ref) {
  const double denom = x_ref.norm() > 1e-300 ? x_ref.norm() : 1.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    acc += (x.row(i).transpose() - x_ref).norm();
  return acc / (x.rows() * denom);
}

inline double consensus_residual(const StackedPoint& x) {
  const Eigen::RowVectorXd mean = x.colwise().mean();
  return (x.rowwise() - mean).norm();
}

/// Applies the method's step `iters` times from x0 replicated to all nodes,
/// recording the error metrics per iteration. Non-finite or huge iterates
/// stop the run with the divergence flag set.
inline Trajectory run(Method method, const StepConfig& cfg, const Problem& p,
                      const Eigen::VectorXd& x0, int iters, const Eigen::VectorXd& x_ref,
                      RunOptions opt = {}) {
  if (iters < 0) throw std::invalid_argument("run: iters must be >= 0");
  const auto t0 = std::chrono::steady_clock::now();
  AlgorithmState st = make_state(method, p, cfg, x0);
  Trajectory traj;
  auto snapshot = [&](const AlgorithmState& s) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    traj.records.push_back({s.k, relative_error(s.x, x_ref), consensus_residual(s.x), secs});
    if (opt.record_iterates) traj.xs.push_back(s.x);
    if (opt.record_aux) {
      if (s.method == Method::Generalized)
        traj.aux.push_back(s.u);
      else if (s.method == Method::Harnessing)
        traj.aux.push_back(s.s);
    }
  };
  snapshot(st);
  for (int k = 0; k < iters; ++k) {
    st = step(std::move(st), cfg, p);
    if (!st.x.allFinite() || st.x.norm() > 1e12) {
      traj.diverged = true;
      traj.divergence_message = "non-finite or unbounded iterate at k=" + std::to_string(st.k) +
                                " (step size likely too large)";
      break;
    }
    snapshot(st);
  }
  return traj;
}

}  // namespace distopt
