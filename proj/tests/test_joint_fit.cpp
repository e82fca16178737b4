#include <doctest.h>

#include <array>
#include <cmath>

#include "benchmark.hpp"
#include "joint_fit.hpp"
#include "likelihood.hpp"
#include "metrics.hpp"

using namespace gldemu;

namespace {

std::array<MultiIndexSet, 4> constant_sets(int m) {
  return {constant_set(m), constant_set(m), constant_set(m), constant_set(m)};
}

ReplicatedDesign one_point_design(const std::vector<double>& ys) {
  MatrixXd X(1, 1);
  X << 0.5;
  MatrixXd Y(1, static_cast<int>(ys.size()));
  for (std::size_t k = 0; k < ys.size(); ++k) Y(0, static_cast<int>(k)) = ys[k];
  return make_design(X, Y, InputModel({Marginal::Uniform(0.0, 1.0)}));
}

VectorXd constants_vector(double l1, double l2, double l3, double l4) {
  VectorXd a(4);
  a << l1, std::log(l2), l3, l4;
  return a;
}

// Degree-1 surrogate in one dimension used as a synthetic ground truth.
LambdaSurrogate linear_truth() {
  const InputModel im({Marginal::Uniform(0.0, 1.0)});
  LambdaSurrogate s;
  s.input = im;
  for (int k = 0; k < 4; ++k) {
    s.pc[k].input = im;
    s.pc[k].set = total_degree_set(1, 1);
    s.pc[k].coefficients = VectorXd::Zero(2);
  }
  s.pc[0].coefficients << 1.0, 0.4;    // lambda1
  s.pc[1].coefficients << 0.2, -0.25;  // log lambda2
  s.pc[2].coefficients << 0.3, 0.08;   // lambda3
  s.pc[3].coefficients << 0.5, 0.0;    // lambda4
  return s;
}

ReplicatedDesign simulate_from(const LambdaSurrogate& truth, int n, int r, std::uint64_t seed) {
  MatrixXd X(n, 1);
  for (int i = 0; i < n; ++i) X(i, 0) = (i + 0.5) / n;
  MatrixXd Y(n, r);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const GldParams p = truth.params_at(X.row(i).transpose());
    for (int k = 0; k < r; ++k) Y(i, k) = quantile(p, rng.uniform());
  }
  return make_design(X, Y, truth.input, seed);
}

}  // namespace

TEST_CASE("joint_nll: single observation under constant expansions") {
  const auto d = one_point_design({0.0});
  const double v = joint_nll(constants_vector(0, 1, 1, 1), d, constant_sets(1));
  CHECK(v == doctest::Approx(-std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("joint_nll: +inf when an observation leaves the candidate support") {
  const auto d = one_point_design({-0.3, 0.1, 0.2, 0.4});
  // lambda3 = 5: lower bound 0 - 1/5 = -0.2 > min y = -0.3
  const double v = joint_nll(constants_vector(0, 1, 5, -1), d, constant_sets(1));
  CHECK(std::isinf(v));
  CHECK(v > 0);
  CHECK_THROWS_AS(joint_nll_grad(constants_vector(0, 1, 5, -1), d, constant_sets(1)), DomainError);
}

TEST_CASE("joint_nll: pooled sum identity with per-point likelihoods") {
  Rng rng(10);
  const GldParams p(0.4, 1.3, 0.25, 0.6);
  MatrixXd X(4, 1);
  X << 0.1, 0.4, 0.6, 0.9;
  MatrixXd Y(4, 6);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 6; ++k) Y(i, k) = quantile(p, rng.uniform());
  const auto d = make_design(X, Y, InputModel({Marginal::Uniform(0.0, 1.0)}));

  const double pooled =
      joint_nll(constants_vector(p.lambda1, p.lambda2, p.lambda3, p.lambda4), d, constant_sets(1));
  double per_point = 0.0;
  for (int i = 0; i < 4; ++i) {
    std::vector<double> ys(6);
    for (int k = 0; k < 6; ++k) ys[k] = Y(i, k);
    per_point += gld_nll(p, ys);
  }
  CHECK(pooled == doctest::Approx(per_point).epsilon(1e-10));
}

TEST_CASE("joint_nll is invariant to permuting replications within a point") {
  const auto d1 = one_point_design({-0.1, 0.3, 0.05, -0.2, 0.4});
  const auto d2 = one_point_design({0.4, -0.2, 0.3, 0.05, -0.1});
  const VectorXd a = constants_vector(0.1, 1.1, 0.2, 0.3);
  CHECK(joint_nll(a, d1, constant_sets(1)) ==
        doctest::Approx(joint_nll(a, d2, constant_sets(1))).epsilon(1e-13));
}

TEST_CASE("joint_nll_grad: constant expansions reduce to summed parameter derivatives") {
  Rng rng(12);
  const GldParams p(0.2, 0.9, 0.15, 0.45);
  const auto ys = sample(p, 40, rng);
  const auto d = one_point_design(ys);
  const VectorXd a = constants_vector(p.lambda1, p.lambda2, p.lambda3, p.lambda4);
  const VectorXd g = joint_nll_grad(a, d, constant_sets(1));

  double sums[4] = {0, 0, 0, 0};
  for (const double y : ys) {
    const double u = inverse_cdf(p, y, 1e-13);
    const ObsGrad og = obs_grad(p, u);
    for (int s = 0; s < 4; ++s) sums[s] += og.dl_dlam[s];
  }
  CHECK(g(0) == doctest::Approx(sums[0]).epsilon(1e-8));
  CHECK(g(1) == doctest::Approx(sums[1] * p.lambda2).epsilon(1e-8));  // log link chain
  CHECK(g(2) == doctest::Approx(sums[2]).epsilon(1e-8));
  CHECK(g(3) == doctest::Approx(sums[3]).epsilon(1e-8));
}

TEST_CASE("joint_nll_grad matches central finite differences") {
  Rng rng(2024);
  for (int instance = 0; instance < 10; ++instance) {
    const int m = instance % 2 == 0 ? 1 : 2;
    InputModel im(std::vector<Marginal>(m, Marginal::Uniform(0.0, 1.0)));
    LambdaSurrogate truth;
    truth.input = im;
    for (int k = 0; k < 4; ++k) {
      truth.pc[k].input = im;
      truth.pc[k].set = total_degree_set(m, 1);
      VectorXd c = VectorXd::Zero(m + 1);
      c(0) = (k == 0   ? rng.uniform(-0.5, 0.5)
              : k == 1 ? rng.uniform(-0.3, 0.3)
              : k == 2 ? rng.uniform(0.05, 0.4)
                       : rng.uniform(0.05, 0.4));
      for (int j = 1; j <= m; ++j) c(j) = rng.uniform(-0.1, 0.1);
      truth.pc[k].coefficients = c;
    }

    const int n = 10, r = 5;
    MatrixXd X(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) X(i, j) = rng.uniform();
    MatrixXd Y(n, r);
    for (int i = 0; i < n; ++i) {
      const GldParams p = truth.params_at(X.row(i).transpose());
      for (int k = 0; k < r; ++k) Y(i, k) = quantile(p, rng.uniform(0.01, 0.99));
    }
    const auto d = make_design(X, Y, im);
    const std::array<MultiIndexSet, 4> sets{truth.pc[0].set, truth.pc[1].set, truth.pc[2].set,
                                            truth.pc[3].set};
    const VectorXd a = flatten(truth);
    const VectorXd g = joint_nll_grad(a, d, sets);

    const double h = 1e-6;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      VectorXd ap = a, am = a;
      ap(k) += h;
      am(k) -= h;
      const double fp = joint_nll(ap, d, sets);
      const double fm = joint_nll(am, d, sets);
      REQUIRE(std::isfinite(fp));
      REQUIRE(std::isfinite(fm));
      const double fd = (fp - fm) / (2.0 * h);
      CHECK(std::abs(fd - g(k)) <= 1e-5 * std::max(1.0, std::abs(g(k))));
    }
  }
}

TEST_CASE("feasible_start: hand-checked one-point cases") {
  const auto d = one_point_design({-0.3, 0.1, 0.25, 0.3});

  // lambda3 = 2 < 10/3: already feasible, returned unchanged
  const VectorXd a1 = constants_vector(0, 1, 2, -1);
  CHECK(feasible_start(a1, d, constant_sets(1)) == a1);

  // lambda3 = 5 > 10/3: constant reduced to 0.95 * 10/3
  const VectorXd a2 = constants_vector(0, 1, 5, -1);
  const VectorXd r2 = feasible_start(a2, d, constant_sets(1));
  CHECK(r2(2) == doctest::Approx(0.95 * 10.0 / 3.0).epsilon(1e-12));
  const GldParams repaired(r2(0), std::exp(r2(1)), r2(2), r2(3));
  CHECK(support(repaired).lower < -0.3);
}

TEST_CASE("feasible_start: repaired coefficients satisfy the bound constraints") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const LambdaSurrogate truth = linear_truth();
    const auto d = simulate_from(truth, 12, 6, 100 + trial);
    VectorXd a = flatten(truth);
    a(2) += rng.uniform(0.0, 3.0);  // inflate lambda3 constant: shrink lower support
    a(6) += rng.uniform(0.0, 3.0);  // inflate lambda4 constant
    const std::array<MultiIndexSet, 4> sets{truth.pc[0].set, truth.pc[1].set, truth.pc[2].set,
                                            truth.pc[3].set};
    const VectorXd repaired = feasible_start(a, d, sets);
    const LambdaSurrogate rs = with_coefficients(truth, repaired);
    CHECK(satisfies_support_constraints(rs, d));
  }
}

TEST_CASE("fit_joint: self-consistency on data simulated from a known surrogate") {
  const LambdaSurrogate truth = linear_truth();
  const auto d = simulate_from(truth, 100, 50, 777);

  LambdaSurrogate init = truth;
  Rng rng(5);
  VectorXd a0 = flatten(truth);
  for (Eigen::Index k = 0; k < a0.size(); ++k) a0(k) += 0.05 * rng.normal();
  init = with_coefficients(truth, a0);

  JointFitOptions opts;
  opts.seed = 99;
  const auto [fit, report] = fit_joint(d, init, opts);

  const std::array<MultiIndexSet, 4> sets{truth.pc[0].set, truth.pc[1].set, truth.pc[2].set,
                                          truth.pc[3].set};
  const double nll_fit = joint_nll(flatten(fit), d, sets);
  const double nll_truth = joint_nll(flatten(truth), d, sets);
  CHECK(nll_fit <= nll_truth + 1e-9);
  CHECK(report.final_nll == doctest::Approx(nll_fit).epsilon(1e-12));

  MatrixXd test_x(100, 1);
  for (int i = 0; i < 100; ++i) test_x(i, 0) = (i + 0.5) / 100.0;
  const auto ref = [&](const VectorXd& x) { return gld_density(truth.params_at(x)); };
  const ErrorReport err = mean_hellinger(fit, ref, test_x);
  CHECK(err.mean_hellinger < 0.03);

  CHECK(satisfies_support_constraints(fit, d));
  CHECK(std::isfinite(report.grad_norm));
}

TEST_CASE("fit_joint: monotone improvement and determinism") {
  const LambdaSurrogate truth = linear_truth();
  const auto d = simulate_from(truth, 30, 10, 4242);
  Rng rng(6);
  VectorXd a0 = flatten(truth);
  for (Eigen::Index k = 0; k < a0.size(); ++k) a0(k) += 0.1 * rng.normal();
  const LambdaSurrogate init = with_coefficients(truth, a0);

  JointFitOptions opts;
  opts.seed = 11;
  const auto [f1, r1] = fit_joint(d, init, opts);
  const auto [f2, r2] = fit_joint(d, init, opts);
  CHECK(flatten(f1) == flatten(f2));
  CHECK(r1.final_nll == r2.final_nll);
  CHECK(r1.iterations == r2.iterations);
  CHECK(r1.optimizer == r2.optimizer);

  const std::array<MultiIndexSet, 4> sets{truth.pc[0].set, truth.pc[1].set, truth.pc[2].set,
                                          truth.pc[3].set};
  const VectorXd start = feasible_start(a0, d, sets);
  CHECK(r1.final_nll <= joint_nll(start, d, sets) + 1e-12);
}

TEST_CASE("fit_joint: first-order condition at an interior optimum") {
  // Constant expansions fitted to data from a bell-shaped GLD: the optimum is
  // interior, so the trust region should converge by the gradient criterion.
  const InputModel im({Marginal::Uniform(0.0, 1.0)});
  LambdaSurrogate proto;
  proto.input = im;
  const GldParams p(0.5, 1.0, 0.2, 0.2);
  const double vals[4] = {p.lambda1, std::log(p.lambda2), p.lambda3, p.lambda4};
  for (int k = 0; k < 4; ++k) {
    proto.pc[k].input = im;
    proto.pc[k].set = constant_set(1);
    proto.pc[k].coefficients = VectorXd::Constant(1, vals[k]);
  }
  const auto d = simulate_from(proto, 20, 25, 999);
  const auto [fit, report] = fit_joint(d, proto);
  CHECK(report.grad_norm <= 1e-5 * std::max(1.0, std::abs(report.final_nll)));
}
