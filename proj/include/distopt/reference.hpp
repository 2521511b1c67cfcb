#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "distopt/problem.hpp"

namespace distopt {

struct ReferenceOptions {
  double tol = 1e-12;  // on || grad f ||, f = sum_i f_i
  int max_iters = 500000;
};

struct ReferenceError : std::runtime_error {
  ReferenceError(std::string msg, Eigen::VectorXd best_, double grad_norm_)
      : std::runtime_error(std::move(msg)), best(std::move(best_)), grad_norm(grad_norm_) {}
  Eigen::VectorXd best;
  double grad_norm;
};

/// Centralized Nesterov gradient method on f(x) = sum_i f_i(x) with step 1/L_f
/// and the strongly convex momentum (sqrt(L)-sqrt(mu))/(sqrt(L)+sqrt(mu)).
/// Stops when ||grad f|| <= tol at the returned point.
inline Eigen::VectorXd solve_reference(const Problem& p, ReferenceOptions opt = {}) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solve_reference: tol must be positive");
  // f has constants (N mu, N L); the momentum ratio is scale invariant.
  const double lf = p.n() * p.lip();
  const double beta = (std::sqrt(p.lip()) - std::sqrt(p.mu())) / (std::sqrt(p.lip()) + std::sqrt(p.mu()));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p.d());
  Eigen::VectorXd y = x;
  double best_norm = p.sum_grad(x).norm();
  Eigen::VectorXd best = x;
  if (best_norm <= opt.tol) return x;
  for (int k = 0; k < opt.max_iters; ++k) {
    const Eigen::VectorXd x_next = y - p.sum_grad(y) / lf;
    y = x_next + beta * (x_next - x);
    x = x_next;
    const double gn = p.sum_grad(x).norm();
    if (gn <= opt.tol) return x;
    if (gn < best_norm) {
      best_norm = gn;
      best = x;
    }
  }
  throw ReferenceError("solve_reference: max_iters exhausted (||grad|| = " +
                           std::to_string(best_norm) + ")",
                       std::move(best), best_norm);
}

}  // namespace distopt
