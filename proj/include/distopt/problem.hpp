#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace distopt {

/// N x d array of reals; row i is node i's solution estimate.
using StackedPoint = Eigen::MatrixXd;

/// Per-node strongly convex quadratic f_i(x) = 1/2 x'A_i x + c_i'x,
/// with mu I <= A_i <= L I for the declared constants.
struct QuadraticSpec {
  std::vector<Eigen::MatrixXd> a;
  std::vector<Eigen::VectorXd> c;
};

/// Per-node l2-regularized logistic loss over the node's samples:
///   f_i(x) = sum_j ln(1 + exp(-b_ij (a_ij'x1 + x0))) + R/2 ||x||^2,
/// with x = (x1', x0)'. features[i] is J_i x (d-1), labels in {-1,+1}.
struct LogisticSpec {
  std::vector<Eigen::MatrixXd> features;
  std::vector<Eigen::VectorXd> labels;
  double reg = 0.0;
};

namespace detail {

inline double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(-t)) without overflow for large |t|
inline double log1p_exp_neg(double t) {
  if (t >= 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

// c_ij = (b_ij a_ij', b_ij)' stacked per sample of node i
inline Eigen::MatrixXd signed_samples(const LogisticSpec& s, int i) {
  const auto& feat = s.features[i];
  const auto& lab = s.labels[i];
  Eigen::MatrixXd c(feat.rows(), feat.cols() + 1);
  for (Eigen::Index j = 0; j < feat.rows(); ++j) {
    c.row(j).head(feat.cols()) = lab(j) * feat.row(j);
    c(j, feat.cols()) = lab(j);
  }
  return c;
}

}  // namespace detail

/// mu = R; L = (1/(4N)) ||sum_ij c_ij c_ij'||_2 + R with c_ij = (b_ij a_ij', b_ij)'.
inline std::pair<double, double> constants_logistic(const LogisticSpec& spec) {
  const int n = static_cast<int>(spec.features.size());
  if (n == 0) throw std::invalid_argument("constants_logistic: empty spec");
  const int d = static_cast<int>(spec.features[0].cols()) + 1;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd c = detail::signed_samples(spec, i);
    gram += c.transpose() * c;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
  const double lip = es.eigenvalues().maxCoeff() / (4.0 * n) + spec.reg;
  return {spec.reg, lip};
}

/// Collection of N local costs with gradient/Hessian access and the
/// strong-convexity and smoothness constants (mu, L).
class Problem {
 public:
  static Problem quadratic(QuadraticSpec spec, double mu, double lip) {
    if (spec.a.empty() || spec.a.size() != spec.c.size())
      throw std::invalid_argument("Problem: malformed quadratic spec");
    if (!(mu > 0.0) || mu > lip) throw std::invalid_argument("Problem: need 0 < mu <= lip");
    Problem p;
    p.n_ = static_cast<int>(spec.a.size());
    p.d_ = static_cast<int>(spec.a[0].rows());
    p.mu_ = mu;
    p.lip_ = lip;
    p.spec_ = std::move(spec);
    return p;
  }

  static Problem logistic(LogisticSpec spec) {
    if (spec.features.empty() || spec.features.size() != spec.labels.size())
      throw std::invalid_argument("Problem: malformed logistic spec");
    if (!(spec.reg > 0.0)) throw std::invalid_argument("Problem: logistic needs R > 0");
    for (std::size_t i = 0; i < spec.labels.size(); ++i)
      for (Eigen::Index j = 0; j < spec.labels[i].size(); ++j)
        if (spec.labels[i](j) != 1.0 && spec.labels[i](j) != -1.0)
          throw std::invalid_argument("Problem: labels must be in {-1,+1}");
    Problem p;
    p.n_ = static_cast<int>(spec.features.size());
    p.d_ = static_cast<int>(spec.features[0].cols()) + 1;
    std::tie(p.mu_, p.lip_) = constants_logistic(spec);
    p.spec_ = std::move(spec);
    return p;
  }

  int n() const { return n_; }
  int d() const { return d_; }
  double mu() const { return mu_; }
  double lip() const { return lip_; }
  bool is_quadratic() const { return std::holds_alternative<QuadraticSpec>(spec_); }
  const QuadraticSpec& quadratic_spec() const { return std::get<QuadraticSpec>(spec_); }
  const LogisticSpec& logistic_spec() const { return std::get<LogisticSpec>(spec_); }

  double local_value(int i, const Eigen::VectorXd& x) const {
    check_args(i, x);
    if (const auto* q = std::get_if<QuadraticSpec>(&spec_))
      return 0.5 * x.dot(q->a[i] * x) + q->c[i].dot(x);
    const auto& s = std::get<LogisticSpec>(spec_);
    const Eigen::MatrixXd c = detail::signed_samples(s, i);
    double v = 0.5 * s.reg * x.squaredNorm();
    const Eigen::VectorXd margins = c * x;
    for (Eigen::Index j = 0; j < margins.size(); ++j) v += detail::log1p_exp_neg(margins(j));
    return v;
  }

  Eigen::VectorXd local_grad(int i, const Eigen::VectorXd& x) const {
    check_args(i, x);
    if (const auto* q = std::get_if<QuadraticSpec>(&spec_)) return q->a[i] * x + q->c[i];
    const auto& s = std::get<LogisticSpec>(spec_);
    const Eigen::MatrixXd c = detail::signed_samples(s, i);
    Eigen::VectorXd g = s.reg * x;
    const Eigen::VectorXd margins = c * x;
    for (Eigen::Index j = 0; j < margins.size(); ++j)
      g -= detail::sigmoid(-margins(j)) * c.row(j).transpose();
    return g;
  }

  Eigen::MatrixXd local_hessian(int i, const Eigen::VectorXd& x) const {
    check_args(i, x);
    if (const auto* q = std::get_if<QuadraticSpec>(&spec_)) return q->a[i];
    const auto& s = std::get<LogisticSpec>(spec_);
    const Eigen::MatrixXd c = detail::signed_samples(s, i);
    Eigen::MatrixXd h = s.reg * Eigen::MatrixXd::Identity(d_, d_);
    const Eigen::VectorXd margins = c * x;
    for (Eigen::Index j = 0; j < margins.size(); ++j) {
      const double sj = detail::sigmoid(margins(j));
      h += sj * (1.0 - sj) * c.row(j).transpose() * c.row(j);
    }
    return h;
  }

  /// Row i of the result is grad f_i at row i of x.
  StackedPoint stacked_grad(const StackedPoint& x) const {
    if (x.rows() != n_ || x.cols() != d_)
      throw std::invalid_argument("stacked_grad: expected N x d stacked point");
    StackedPoint g(n_, d_);
    for (int i = 0; i < n_; ++i) g.row(i) = local_grad(i, x.row(i).transpose()).transpose();
    return g;
  }

  /// Gradient of f(x) = sum_i f_i(x) at a common point.
  Eigen::VectorXd sum_grad(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d_);
    for (int i = 0; i < n_; ++i) g += local_grad(i, x);
    return g;
  }

  double sum_value(const Eigen::VectorXd& x) const {
    double v = 0.0;
    for (int i = 0; i < n_; ++i) v += local_value(i, x);
    return v;
  }

 private:
  void check_args(int i, const Eigen::VectorXd& x) const {
    if (i < 0 || i >= n_) throw std::invalid_argument("Problem: node index out of range");
    if (x.size() != d_) throw std::invalid_argument("Problem: point has wrong dimension");
  }

  int n_ = 0, d_ = 0;
  double mu_ = 0.0, lip_ = 0.0;
  std::variant<QuadraticSpec, LogisticSpec> spec_;
};

/// Random SPD quadratics with spectra drawn uniformly from [mu, lip].
inline QuadraticSpec random_quadratic(int n, int d, double mu, double lip, std::uint64_t seed) {
  if (n < 1 || d < 1 || !(mu > 0.0) || mu > lip)
    throw std::invalid_argument("random_quadratic: bad arguments");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(mu, lip);
  QuadraticSpec spec;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) = gauss(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd eigs(d);
    for (int r = 0; r < d; ++r) eigs(r) = unif(rng);
    spec.a.push_back(q * eigs.asDiagonal() * q.transpose());
    Eigen::VectorXd c(d);
    for (int r = 0; r < d; ++r) c(r) = gauss(rng);
    spec.c.push_back(c);
  }
  return spec;
}

struct GeneratedLogistic {
  LogisticSpec spec;
  Eigen::VectorXd planted;  // the vector used to generate labels, not the loss minimizer
};

/// Features and the planted vector are i.i.d. standard normal; labels follow
/// b_ij = sign(a_ij' x1 + x0 + eps_ij) with eps_ij ~ N(0, noise_variance).
inline GeneratedLogistic generate_logistic_data(int n, int samples_per_node, int d,
                                                double noise_variance, std::uint64_t seed,
                                                double reg = 0.03) {
  if (d < 2) throw std::invalid_argument("generate_logistic_data: need d >= 2");
  if (n < 1 || samples_per_node < 0 || noise_variance < 0.0)
    throw std::invalid_argument("generate_logistic_data: bad arguments");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd planted(d);
  for (int r = 0; r < d; ++r) planted(r) = gauss(rng);
  const double noise_sd = std::sqrt(noise_variance);
  LogisticSpec spec;
  spec.reg = reg;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd feat(samples_per_node, d - 1);
    Eigen::VectorXd lab(samples_per_node);
    for (int j = 0; j < samples_per_node; ++j) {
      for (int c = 0; c < d - 1; ++c) feat(j, c) = gauss(rng);
      const double margin =
          feat.row(j).dot(planted.head(d - 1)) + planted(d - 1) + noise_sd * gauss(rng);
      lab(j) = margin >= 0.0 ? 1.0 : -1.0;
    }
    spec.features.push_back(std::move(feat));
    spec.labels.push_back(std::move(lab));
  }
  return {std::move(spec), std::move(planted)};
}

/// Dataset CSV: header, then one row per (node, sample): node_id, label, f1..f_{d-1}.
inline void write_dataset_csv(const LogisticSpec& spec, std::ostream& out) {
  const int dm1 = spec.features.empty() ? 0 : static_cast<int>(spec.features[0].cols());
  out << "node_id,label";
  for (int c = 1; c <= dm1; ++c) out << ",f" << c;
  out << "\n";
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < spec.features.size(); ++i)
    for (Eigen::Index j = 0; j < spec.features[i].rows(); ++j) {
      line.str("");
      line << i << "," << static_cast<int>(spec.labels[i](j));
      for (Eigen::Index c = 0; c < spec.features[i].cols(); ++c)
        line << "," << spec.features[i](j, c);
      out << line.str() << "\n";
    }
}

inline LogisticSpec read_dataset_csv(std::istream& in, double reg) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("dataset csv: empty file");
  std::vector<std::vector<std::vector<double>>> feats;
  std::vector<std::vector<double>> labs;
  std::string line;
  int dm1 = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() < 2) throw std::invalid_argument("dataset csv: short row");
    const int node = static_cast<int>(row[0]);
    if (node < 0) throw std::invalid_argument("dataset csv: negative node id");
    if (dm1 < 0) dm1 = static_cast<int>(row.size()) - 2;
    if (static_cast<int>(row.size()) - 2 != dm1)
      throw std::invalid_argument("dataset csv: inconsistent feature count");
    if (static_cast<std::size_t>(node) >= feats.size()) {
      feats.resize(node + 1);
      labs.resize(node + 1);
    }
    labs[node].push_back(row[1]);
    feats[node].emplace_back(row.begin() + 2, row.end());
  }
  if (feats.empty()) throw std::invalid_argument("dataset csv: no data rows");
  LogisticSpec spec;
  spec.reg = reg;
  for (std::size_t i = 0; i < feats.size(); ++i) {
    if (feats[i].empty()) throw std::invalid_argument("dataset csv: node without samples");
    Eigen::MatrixXd f(feats[i].size(), dm1);
    Eigen::VectorXd l(labs[i].size());
    for (std::size_t j = 0; j < feats[i].size(); ++j) {
      for (int c = 0; c < dm1; ++c) f(j, c) = feats[i][j][c];
      l(j) = labs[i][j];
    }
    spec.features.push_back(std::move(f));
    spec.labels.push_back(std::move(l));
  }
  return spec;
}

}  // namespace distopt
