#include <Eigen/Dense>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "distopt/methods.hpp"
#include "distopt/reference.hpp"

using namespace distopt;

namespace {

WeightMatrix connected_weights(int n, double radius, std::uint64_t seed) {
  Graph g = random_geometric(n, radius, seed);
  while (!is_connected(g)) g = random_geometric(n, radius, ++seed);
  return metropolis_weights(g);
}

WeightMatrix single_node_weights() { return metropolis_weights(Graph(1, {})); }

double max_iterate_gap(const Trajectory& a, const Trajectory& b) {
  REQUIRE(a.xs.size() == b.xs.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < a.xs.size(); ++k)
    worst = std::max(worst, (a.xs[k] - b.xs[k]).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

TEST_CASE("dgm on a single node takes the exact Newton step for f = x^2/2") {
  QuadraticSpec spec;
  spec.a = {Eigen::MatrixXd::Identity(1, 1)};
  spec.c = {Eigen::VectorXd::Zero(1)};
  const Problem p = Problem::quadratic(spec, 1.0, 1.0);
  StepConfig cfg{1.0, BMatrixSpec::zero(), single_node_weights()};
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  AlgorithmState st = make_state(Method::Dgm, p, cfg, x0);
  st = dgm_step(std::move(st), cfg, p);
  CHECK(st.x(0, 0) == Catch::Approx(0.0).margin(1e-15));
  CHECK(st.k == 1);
}

TEST_CASE("dgm with alpha -> 0 limit is the pure consensus map") {
  const WeightMatrix w = connected_weights(6, 0.6, 2);
  const Problem p = Problem::quadratic(random_quadratic(6, 2, 1.0, 2.0, 3), 1.0, 2.0);
  StepConfig cfg{1e-300, BMatrixSpec::zero(), w};
  Eigen::VectorXd x0(2);
  x0 << 1.0, -2.0;
  AlgorithmState st = make_state(Method::Dgm, p, cfg, x0);
  // perturb rows so the consensus map actually moves things
  st.x(0, 0) += 1.0;
  const StackedPoint expected = w.w * st.x;
  st = dgm_step(std::move(st), cfg, p);
  CHECK((st.x - expected).cwiseAbs().maxCoeff() < 1e-290);
}

TEST_CASE("dgm stalls at distance Theta(alpha) from the solution") {
  // f1 = (x-1)^2/2, f2 = (x+1)^2/2 on a 2-node graph: x* = 0
  QuadraticSpec spec;
  spec.a = {Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1)};
  Eigen::VectorXd c1(1), c2(1);
  c1 << -1.0;
  c2 << 1.0;
  spec.c = {c1, c2};
  const Problem p = Problem::quadratic(spec, 1.0, 1.0);
  const WeightMatrix w = metropolis_weights(Graph(2, {{0, 1}}));
  const Eigen::VectorXd x_star = solve_reference(p);
  auto fixed_point_distance = [&](double alpha) {
    StepConfig cfg{alpha, BMatrixSpec::zero(), w};
    AlgorithmState st = make_state(Method::Dgm, p, cfg, Eigen::VectorXd::Zero(1));
    for (int k = 0; k < 20000; ++k) {
      const StackedPoint before = st.x;
      st = dgm_step(std::move(st), cfg, p);
      if ((st.x - before).cwiseAbs().maxCoeff() < 1e-15) break;
    }
    return (st.x - x_star.transpose().replicate(2, 1)).norm();
  };
  const double d1 = fixed_point_distance(0.1);
  const double d2 = fixed_point_distance(0.05);
  CHECK(d1 > 1e-4);            // genuinely biased away from x*
  CHECK(d1 / d2 > 1.5);        // shrinks with alpha ...
  CHECK(d1 / d2 < 3.0);        // ... roughly linearly
}

TEST_CASE("extra bootstrap step equals one dgm step") {
  const WeightMatrix w = connected_weights(5, 0.7, 4);
  const Problem p = Problem::quadratic(random_quadratic(5, 3, 1.0, 4.0, 5), 1.0, 4.0);
  StepConfig cfg{0.05, BMatrixSpec::zero(), w};
  Eigen::VectorXd x0 = Eigen::VectorXd::Ones(3);
  AlgorithmState ex = make_state(Method::Extra, p, cfg, x0);
  AlgorithmState dg = make_state(Method::Dgm, p, cfg, x0);
  ex = extra_step(std::move(ex), cfg, p);
  dg = dgm_step(std::move(dg), cfg, p);
  CHECK((ex.x - dg.x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("extra converges geometrically on a 2-node quadratic") {
  QuadraticSpec spec = random_quadratic(2, 2, 1.0, 1.5, 7);
  const Problem p = Problem::quadratic(spec, 1.0, 1.5);
  const WeightMatrix w = metropolis_weights(Graph(2, {{0, 1}}));
  const Eigen::VectorXd x_star = solve_reference(p, {1e-14, 100000});
  StepConfig cfg{1.0 / (3.0 * p.lip()), BMatrixSpec::zero(), w};
  const Trajectory traj = run(Method::Extra, cfg, p, Eigen::VectorXd::Zero(2), 100, x_star);
  CHECK_FALSE(traj.diverged);
  CHECK(traj.terminal_error() < 1e-8);
  // errors shrink by a roughly constant factor once the transient passes
  for (std::size_t k = 20; k + 10 < traj.records.size(); k += 10)
    CHECK(traj.records[k + 10].relative_error < traj.records[k].relative_error);
}

TEST_CASE("harnessing tracks the average gradient exactly") {
  const WeightMatrix w = connected_weights(7, 0.6, 8);
  const Problem p = Problem::logistic(generate_logistic_data(7, 2, 4, 0.4, 71).spec);
  StepConfig cfg{1.0 / (3.0 * p.lip()), BMatrixSpec::zero(), w};
  AlgorithmState st = make_state(Method::Harnessing, p, cfg, Eigen::VectorXd::Zero(4));
  for (int k = 0; k < 60; ++k) {
    const Eigen::RowVectorXd tracked = st.s.colwise().mean();
    const Eigen::RowVectorXd actual = p.stacked_grad(st.x).colwise().mean();
    CHECK((tracked - actual).cwiseAbs().maxCoeff() < 1e-12);
    st = harnessing_step(std::move(st), cfg, p);
  }
}

TEST_CASE("harnessing on a single node is centralized gradient descent") {
  QuadraticSpec spec = random_quadratic(1, 3, 1.0, 2.0, 9);
  const Problem p = Problem::quadratic(spec, 1.0, 2.0);
  StepConfig cfg{0.3, BMatrixSpec::zero(), single_node_weights()};
  AlgorithmState st = make_state(Method::Harnessing, p, cfg, Eigen::VectorXd::Ones(3));
  Eigen::VectorXd y = Eigen::VectorXd::Ones(3);
  for (int k = 0; k < 25; ++k) {
    CHECK((st.s.row(0).transpose() - p.local_grad(0, st.x.row(0).transpose())).norm() < 1e-14);
    st = harnessing_step(std::move(st), cfg, p);
    y -= cfg.alpha * p.local_grad(0, y);
    CHECK((st.x.row(0).transpose() - y).norm() < 1e-13);
  }
}

TEST_CASE("generalized(0) matches harnessing and generalized(W/alpha) matches extra") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 2; ++trial) {
    const WeightMatrix w = connected_weights(8, 0.55, rng());
    const Problem p =
        trial == 0 ? Problem::quadratic(random_quadratic(8, 3, 0.5, 4.0, rng()), 0.5, 4.0)
                   : Problem::logistic(generate_logistic_data(8, 2, 3, 0.4, rng()).spec);
    const Eigen::VectorXd x_star = solve_reference(p);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(p.d());
    const int iters = 200;
    StepConfig cfg{1.0 / (3.0 * p.lip()), BMatrixSpec::zero(), w};
    const Trajectory harness = run(Method::Harnessing, cfg, p, x0, iters, x_star);
    const Trajectory gen_zero = run(Method::Generalized, cfg, p, x0, iters, x_star);
    CHECK(max_iterate_gap(harness, gen_zero) <= 1e-10);

    StepConfig cfg_extra{cfg.alpha, BMatrixSpec::w_over_alpha(), w};
    const Trajectory extra = run(Method::Extra, cfg_extra, p, x0, iters, x_star);
    const Trajectory gen_extra = run(Method::Generalized, cfg_extra, p, x0, iters, x_star);
    CHECK(max_iterate_gap(extra, gen_extra) <= 1e-10);
  }
}

TEST_CASE("dual average stays at zero for every B spec") {
  const WeightMatrix w = connected_weights(6, 0.65, 13);
  const Problem p = Problem::logistic(generate_logistic_data(6, 2, 3, 0.4, 83).spec);
  const double alpha = 1.0 / (3.0 * p.lip());
  const BMatrixSpec specs[] = {BMatrixSpec::zero(),
                               BMatrixSpec::scaled_identity(tune_b_star(p.mu(), p.lip())),
                               BMatrixSpec::scaled_weight(p.lip()), BMatrixSpec::w_over_alpha()};
  for (const auto& b : specs) {
    StepConfig cfg{alpha, b, w};
    AlgorithmState st = make_state(Method::Generalized, p, cfg, Eigen::VectorXd::Zero(p.d()));
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      st = generalized_step(std::move(st), cfg, p);
      worst = std::max(worst, st.u.colwise().mean().norm());
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("generalized on a single node is centralized gradient descent") {
  QuadraticSpec spec = random_quadratic(1, 2, 1.0, 2.0, 15);
  const Problem p = Problem::quadratic(spec, 1.0, 2.0);
  StepConfig cfg{0.4, BMatrixSpec::zero(), single_node_weights()};
  AlgorithmState st = make_state(Method::Generalized, p, cfg, Eigen::VectorXd::Ones(2));
  Eigen::VectorXd y = Eigen::VectorXd::Ones(2);
  for (int k = 0; k < 30; ++k) {
    CHECK(st.u.cwiseAbs().maxCoeff() == 0.0);  // L = 0 keeps u at zero
    st = generalized_step(std::move(st), cfg, p);
    y -= cfg.alpha * p.local_grad(0, y);
    CHECK((st.x.row(0).transpose() - y).norm() < 1e-13);
  }
}

TEST_CASE("x = 1 (x) x*, u = -grad F(1 (x) x*) is a fixed point of the generalized step") {
  const WeightMatrix w = connected_weights(7, 0.6, 17);
  const Problem p = Problem::logistic(generate_logistic_data(7, 2, 4, 0.4, 89).spec);
  const Eigen::VectorXd x_star = solve_reference(p);
  for (const auto& b : {BMatrixSpec::zero(), BMatrixSpec::scaled_identity(1.3),
                        BMatrixSpec::scaled_weight(0.7)}) {
    StepConfig cfg{1.0 / (3.0 * p.lip()), b, w};
    AlgorithmState st = make_state(Method::Generalized, p, cfg, x_star);
    st.u = -p.stacked_grad(st.x);
    const StackedPoint x_before = st.x, u_before = st.u;
    st = generalized_step(std::move(st), cfg, p);
    CHECK((st.x - x_before).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((st.u - u_before).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("generalized update is simultaneous, not Gauss-Seidel") {
  const WeightMatrix w = connected_weights(5, 0.7, 19);
  const Problem p = Problem::quadratic(random_quadratic(5, 2, 1.0, 3.0, 21), 1.0, 3.0);
  StepConfig cfg{0.05, BMatrixSpec::scaled_identity(2.0), w};
  AlgorithmState st = make_state(Method::Generalized, p, cfg, Eigen::VectorXd::Ones(2));
  for (int k = 0; k < 5; ++k) st = generalized_step(std::move(st), cfg, p);
  // recompute both updates by hand from the same pre-step state, in both orders
  const StackedPoint g = p.stacked_grad(st.x);
  const StackedPoint bx = apply_b(cfg.b_spec, cfg.weight, cfg.alpha, st.x);
  const StackedPoint v = g + st.u - bx;
  const StackedPoint x_first = w.w * st.x - cfg.alpha * (g + st.u);
  const StackedPoint u_first = st.u - (v - w.w * v);
  const AlgorithmState next = generalized_step(st, cfg, p);
  CHECK((next.x - x_first).cwiseAbs().maxCoeff() == 0.0);
  CHECK((next.u - u_first).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("primal-dual u-variable forms reproduce their two-variable counterparts") {
  const WeightMatrix w = connected_weights(6, 0.6, 23);
  const Problem p = Problem::logistic(generate_logistic_data(6, 2, 3, 0.4, 97).spec);
  const double alpha = 1.0 / (3.0 * p.lip());
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(p.d());
  const int iters = 100;

  SECTION("extra form") {
    StepConfig cfg{alpha, BMatrixSpec::w_over_alpha(), w};
    AlgorithmState two_term = make_state(Method::Extra, p, cfg, x0);
    AlgorithmState pd = make_state(Method::Generalized, p, cfg, x0);
    for (int k = 0; k < iters; ++k) {
      two_term = extra_step(std::move(two_term), cfg, p);
      pd = primal_dual_u_step(std::move(pd), cfg, p, PastDualWeight::Zero);
      CHECK((two_term.x - pd.x).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  SECTION("harnessing form") {
    StepConfig cfg{alpha, BMatrixSpec::zero(), w};
    AlgorithmState harness = make_state(Method::Harnessing, p, cfg, x0);
    AlgorithmState pd = make_state(Method::Generalized, p, cfg, x0);
    for (int k = 0; k < iters; ++k) {
      harness = harnessing_step(std::move(harness), cfg, p);
      pd = primal_dual_u_step(std::move(pd), cfg, p, PastDualWeight::Weight);
      CHECK((harness.x - pd.x).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  SECTION("generalized form with the (W - alpha B) past weight") {
    for (const auto& b : {BMatrixSpec::scaled_identity(tune_b_star(p.mu(), p.lip())),
                          BMatrixSpec::scaled_weight(p.lip())}) {
      StepConfig cfg{alpha, b, w};
      AlgorithmState gen = make_state(Method::Generalized, p, cfg, x0);
      AlgorithmState pd = make_state(Method::Generalized, p, cfg, x0);
      for (int k = 0; k < iters; ++k) {
        gen = generalized_step(std::move(gen), cfg, p);
        pd = primal_dual_u_step(std::move(pd), cfg, p, PastDualWeight::WeightMinusAlphaB);
        CHECK((gen.x - pd.x).cwiseAbs().maxCoeff() <= 1e-10);
      }
    }
  }
}

TEST_CASE("tuned scaled-identity beats plain gradient tracking on the figure setup") {
  WeightMatrix w = connected_weights(30, std::sqrt(std::log(30.0) / 30.0), 6);
  const Problem p = Problem::logistic(generate_logistic_data(30, 2, 6, 0.4, 10).spec);
  const Eigen::VectorXd x_star = solve_reference(p);
  const double alpha = 1.0 / (3.0 * p.lip());
  auto iters_to = [](const Trajectory& t, double thr) {
    for (std::size_t k = 0; k < t.records.size(); ++k)
      if (t.records[k].relative_error <= thr) return static_cast<long>(k);
    return -1L;
  };
  StepConfig tuned{alpha, BMatrixSpec::scaled_identity(tune_b_star(p.mu(), p.lip())), w};
  StepConfig plain{alpha, BMatrixSpec::zero(), w};
  const RunOptions lean{false, false};
  const Trajectory t_tuned =
      run(Method::Generalized, tuned, p, Eigen::VectorXd::Zero(p.d()), 3000, x_star, lean);
  const Trajectory t_plain =
      run(Method::Generalized, plain, p, Eigen::VectorXd::Zero(p.d()), 3000, x_star, lean);
  CHECK(t_tuned.terminal_error() < 1e-6);
  const long tuned_it = iters_to(t_tuned, 1e-4);
  const long plain_it = iters_to(t_plain, 1e-4);
  REQUIRE(tuned_it >= 0);
  CHECK((plain_it < 0 || tuned_it < plain_it));
}

TEST_CASE("tune_b_star") {
  CHECK(tune_b_star(1.0, 3.0) == Catch::Approx(2.0));
  CHECK(tune_b_star(0.7, 0.7) == Catch::Approx(0.7));
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> unif(0.1, 5.0);
  auto worst = [](double b, double mu, double lip) {
    return std::max(std::abs(b - mu), std::abs(lip - b));
  };
  for (int trial = 0; trial < 20; ++trial) {
    double mu = unif(rng), lip = unif(rng);
    if (mu > lip) std::swap(mu, lip);
    const double b = tune_b_star(mu, lip);
    CHECK(worst(b, mu, lip) <= worst(b + 0.1, mu, lip) + 1e-12);
    CHECK(worst(b, mu, lip) <= worst(std::max(b - 0.1, 0.0), mu, lip) + 1e-12);
  }
}

TEST_CASE("tune_b_prime") {
  CHECK(tune_b_prime(1.0, 3.0, 1.0) == Catch::Approx(2.0));
  CHECK(tune_b_prime(0.03, 2.0, 0.1) == Catch::Approx(2.03 / 1.1));
  CHECK_THROWS_AS(tune_b_prime(1.0, 3.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(tune_b_prime(1.0, 3.0, -0.2), std::domain_error);
  // minimizes the upper bound max{|b'-mu|, |L - b' lambda_N|} over a grid
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> unif(0.2, 4.0);
  std::uniform_real_distribution<double> lam(0.05, 0.95);
  for (int trial = 0; trial < 20; ++trial) {
    double mu = unif(rng), lip = unif(rng);
    if (mu > lip) std::swap(mu, lip);
    const double ln = lam(rng);
    const double b = tune_b_prime(mu, lip, ln);
    auto bound = [&](double bp) { return std::max(std::abs(bp - mu), std::abs(lip - bp * ln)); };
    for (double bp = 0.0; bp <= 2.0 * lip / ln; bp += lip / 500.0)
      CHECK(bound(b) <= bound(bp) + 1e-9);
  }
}

TEST_CASE("max_step_bound evaluates the stated minimum literally") {
  const double mu = 1.0, lip = 3.0, sigma = 0.5;
  SECTION("b = 0 gives L' = L") {
    const double first = (1.0 - sigma) * mu / (19.0 * lip * lip);
    const double second = (1.0 - sigma) * (1.0 - sigma) * mu / (192.0 * lip * lip);
    CHECK(max_step_bound(mu, lip, sigma, 0.0) == Catch::Approx(std::min(first, second)));
  }
  SECTION("b = mu gives L' = sqrt(L^2 - mu^2)") {
    CHECK(shifted_gradient_lipschitz(mu, lip, mu) == Catch::Approx(std::sqrt(lip * lip - mu * mu)));
  }
  SECTION("L' = 0 drops the second term") {
    CHECK(max_step_bound(1.0, 1.0, 0.0, 1.0) == Catch::Approx(1.0 / 19.0));
  }
  SECTION("generic rule uses L + ||B||") {
    const BMatrixSpec bw = BMatrixSpec::scaled_weight(2.0);
    const double lp = lip + 2.0;
    const double expect = std::min((1.0 - sigma) * mu / (19.0 * lip * lip),
                                   (1.0 - sigma) * (1.0 - sigma) * mu / (192.0 * lp * lip));
    CHECK(max_step_bound(mu, lip, sigma, bw) == Catch::Approx(expect));
  }
}

TEST_CASE("run with zero iterations returns only the initial record") {
  const WeightMatrix w = connected_weights(4, 0.8, 29);
  const Problem p = Problem::quadratic(random_quadratic(4, 2, 1.0, 2.0, 31), 1.0, 2.0);
  StepConfig cfg{0.1, BMatrixSpec::zero(), w};
  const Trajectory traj = run(Method::Dgm, cfg, p, Eigen::VectorXd::Ones(2), 0, Eigen::VectorXd::Ones(2));
  REQUIRE(traj.records.size() == 1);
  CHECK(traj.records[0].k == 0);
  // replicated initialization: every node starts from the same point
  CHECK(consensus_residual(traj.xs[0]) == 0.0);
}

TEST_CASE("dgm plateaus at least 10x above the generalized method") {
  const WeightMatrix w = connected_weights(8, 0.55, 33);
  const Problem p = Problem::quadratic(random_quadratic(8, 3, 1.0, 5.0, 35), 1.0, 5.0);
  const Eigen::VectorXd x_star = solve_reference(p, {1e-13, 200000});
  StepConfig cfg{1.0 / (5.0 * p.lip()), BMatrixSpec::scaled_identity(tune_b_star(p.mu(), p.lip())),
                 w};
  const RunOptions lean{false, false};
  const Trajectory dgm = run(Method::Dgm, cfg, p, Eigen::VectorXd::Zero(3), 4000, x_star, lean);
  const Trajectory gen =
      run(Method::Generalized, cfg, p, Eigen::VectorXd::Zero(3), 4000, x_star, lean);
  CHECK(dgm.terminal_error() >= 10.0 * gen.terminal_error());
}

TEST_CASE("divergence guard aborts with a diagnostic") {
  const WeightMatrix w = connected_weights(5, 0.7, 37);
  const Problem p = Problem::quadratic(random_quadratic(5, 2, 1.0, 8.0, 39), 1.0, 8.0);
  StepConfig cfg{50.0, BMatrixSpec::zero(), w};  // far beyond stability
  const Trajectory traj =
      run(Method::Dgm, cfg, p, Eigen::VectorXd::Ones(2), 500, Eigen::VectorXd::Zero(2));
  CHECK(traj.diverged);
  CHECK(traj.divergence_message.find("step size") != std::string::npos);
  CHECK(traj.records.size() < 500);
}

TEST_CASE("generic B matching b* I reproduces the scaled-identity run") {
  const WeightMatrix w = connected_weights(5, 0.7, 41);
  const Problem p = Problem::quadratic(random_quadratic(5, 2, 1.0, 3.0, 43), 1.0, 3.0);
  const double bstar = tune_b_star(p.mu(), p.lip());
  const Eigen::MatrixXd dense = bstar * Eigen::MatrixXd::Identity(10, 10);
  StepConfig scaled{0.05, BMatrixSpec::scaled_identity(bstar), w};
  StepConfig generic{0.05, BMatrixSpec::make_generic(dense), w};
  const Eigen::VectorXd x_ref = Eigen::VectorXd::Zero(2);
  const Trajectory a = run(Method::Generalized, scaled, p, Eigen::VectorXd::Ones(2), 50, x_ref);
  const Trajectory b = run(Method::Generalized, generic, p, Eigen::VectorXd::Ones(2), 50, x_ref);
  CHECK(max_iterate_gap(a, b) < 1e-12);
  CHECK(b_norm(BMatrixSpec::make_generic(dense), 1.0) == Catch::Approx(bstar));
}

TEST_CASE("validate_generic_b enforces sparsity and the consensus eigenspace") {
  const Graph g(3, {{0, 1}, {1, 2}});
  const WeightMatrix w = metropolis_weights(g);
  const int d = 2;
  // b' W is a valid generic B for any graph
  Eigen::MatrixXd good = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      good.block(i * d, j * d, d, d) = 0.8 * w.w(i, j) * Eigen::MatrixXd::Identity(d, d);
  CHECK_NOTHROW(validate_generic_b(good, g, d));

  Eigen::MatrixXd sparsity_violating = good;
  sparsity_violating(0, 5) = sparsity_violating(5, 0) = 0.1;  // nodes 0 and 2 are not adjacent
  CHECK_THROWS_AS(validate_generic_b(sparsity_violating, g, d), std::invalid_argument);

  Eigen::MatrixXd bad_eigenspace = good;
  bad_eigenspace(0, 0) += 0.5;  // breaks B (1 x y) proportionality
  CHECK_THROWS_AS(validate_generic_b(bad_eigenspace, g, d), std::invalid_argument);
}
