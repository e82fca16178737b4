#include <doctest.h>

#include <cmath>

#include "infer_fit.hpp"
#include "testbed.hpp"

using namespace gldemu;

namespace {

ReplicatedDesign design_with_rows(const MatrixXd& X, const MatrixXd& Y) {
  return make_design(X, Y, InputModel(std::vector<Marginal>(X.cols(), Marginal::Uniform(0.0, 1.0))));
}

}  // namespace

TEST_CASE("local_params: replication precondition") {
  MatrixXd X(2, 1);
  X << 0.2, 0.8;
  MatrixXd Y(2, 3);
  Y << 1, 2, 3, 4, 5, 6;
  const auto d = design_with_rows(X, Y);
  CHECK_THROWS_AS(local_params(d, LocalMethod::mm), InvalidArgument);
}

TEST_CASE("local_params: identical samples give identical rows") {
  Rng rng(1);
  MatrixXd X(3, 1);
  X << 0.1, 0.5, 0.9;
  MatrixXd Y(3, 30);
  for (int k = 0; k < 30; ++k) Y(0, k) = quantile(GldParams(0, 1, 0.5, 0.5), rng.uniform());
  Y.row(1) = Y.row(0);
  Y.row(2) = Y.row(0);
  const auto d = design_with_rows(X, Y);
  for (const LocalMethod m : {LocalMethod::mm, LocalMethod::mle}) {
    const MatrixXd lam = local_params(d, m);
    CHECK(lam.row(0) == lam.row(1));
    CHECK(lam.row(0) == lam.row(2));
  }
}

TEST_CASE("local_params: recovers the generating distribution in moment space") {
  Rng rng(2);
  const GldParams truth(0, 1, 1, 1);
  MatrixXd X(1, 1);
  X << 0.5;
  MatrixXd Y(1, 10000);
  for (int k = 0; k < 10000; ++k) Y(0, k) = quantile(truth, rng.uniform());
  const auto d = design_with_rows(X, Y);
  const MatrixXd lam = local_params(d, LocalMethod::mm);
  const MomentSet m = moments(GldParams(lam(0, 0), lam(0, 1), lam(0, 2), lam(0, 3)));
  CHECK(std::abs(m.mean) < 0.02);
  CHECK(m.variance == doctest::Approx(1.0 / 3.0).epsilon(0.05));
  CHECK(std::abs(m.skewness) < 0.1);
  CHECK(m.kurtosis == doctest::Approx(1.8).epsilon(0.1));
}

TEST_CASE("local_params: failures name the design point") {
  MatrixXd X(2, 1);
  X << 0.3, 0.7;
  MatrixXd Y(2, 5);
  Y.row(0) << 0.9, 1.2, 0.4, 1.6, 0.8;
  Y.row(1) << 2.0, 2.0, 2.0, 2.0, 2.0;  // zero variance: local fit fails
  const auto d = design_with_rows(X, Y);
  try {
    local_params(d, LocalMethod::mm);
    FAIL("expected FitError");
  } catch (const FitError& e) {
    CHECK(std::string(e.what()).find("design point 2") != std::string::npos);
  }
}

TEST_CASE("regression stage reproduces exact polynomial lambda fields") {
  const InputModel im({Marginal::Uniform(0.0, 1.0)});
  const auto A = total_degree_set(1, 2);

  const int n = 40;
  MatrixXd X(n, 1);
  for (int i = 0; i < n; ++i) X(i, 0) = (i + 0.5) / n;

  const auto field = [&](const VectorXd& x, int which) {
    const VectorXd psi = eval_basis(im, A, x);
    switch (which) {
      case 0: return 1.0 + 0.5 * psi(1) + 0.2 * psi(2);   // lambda1
      case 1: return std::exp(0.3 - 0.2 * psi(1));        // lambda2 (exp of degree-1)
      case 2: return 0.2 + 0.1 * psi(2);                  // lambda3
      default: return 0.4 + 0.0 * psi(1);                 // lambda4 constant
    }
  };

  MatrixXd lam(n, 4);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 4; ++k) lam(i, k) = field(X.row(i).transpose(), k);

  const LambdaSurrogate s = fit_surrogate_from_lambdas(im, X, lam, 4);
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    VectorXd x(1);
    x << rng.uniform();
    const auto l = s.lambda(x);
    for (int k = 0; k < 4; ++k)
      CHECK(l[k] == doctest::Approx(field(x, k)).epsilon(1e-6));
  }
}

TEST_CASE("constant stochastic simulator yields near-constant expansions") {
  Rng rng(4);
  const GldParams truth(1.0, 2.0, 0.3, 0.3);
  const int n = 10, r = 200;
  MatrixXd X(n, 1);
  for (int i = 0; i < n; ++i) X(i, 0) = (i + 0.5) / n;
  MatrixXd Y(n, r);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < r; ++k) Y(i, k) = quantile(truth, rng.uniform());
  const auto d = design_with_rows(X, Y);
  const LambdaSurrogate s = infer_and_fit(d, LocalMethod::mm);

  VectorXd xa(1), xb(1);
  xa << 0.05;
  xb << 0.95;
  const auto la = s.lambda(xa), lb = s.lambda(xb);
  for (int k = 0; k < 4; ++k)
    CHECK(std::abs(la[k] - lb[k]) < 0.1 * (1.0 + std::abs(la[k])));
}

TEST_CASE("surrogate lambda2 stays positive everywhere (link guarantee)") {
  const auto d = run_replicated(
      CaseId::example1, design(DesignKind::sobol, 1, 20, [] {
        MatrixXd b(1, 2);
        b << 0.0, 1.0;
        return b;
      }(), 0),
      20, 7);
  const LambdaSurrogate s = infer_and_fit(d, LocalMethod::mm);
  Rng rng(5);
  for (int t = 0; t < 10000; ++t) {
    VectorXd x(1);
    x << rng.uniform();
    CHECK(s.lambda(x)[1] > 0.0);
  }
}

TEST_CASE("infer_and_fit is deterministic and beats the constant baseline in LOO") {
  const auto d = run_replicated(
      CaseId::example1, design(DesignKind::sobol, 1, 25, [] {
        MatrixXd b(1, 2);
        b << 0.0, 1.0;
        return b;
      }(), 0),
      25, 11);

  const LambdaSurrogate s1 = infer_and_fit(d, LocalMethod::mm, 5);
  const LambdaSurrogate s2 = infer_and_fit(d, LocalMethod::mm, 5);
  for (int k = 0; k < 4; ++k) {
    CHECK(s1.pc[k].coefficients == s2.pc[k].coefficients);
    CHECK(s1.pc[k].set.indices == s2.pc[k].set.indices);
  }

  // constant-only baseline per column
  const MatrixXd lam = local_params(d, LocalMethod::mm);
  const MatrixXd Psi0 = basis_matrix(d.input, constant_set(1), d.X);
  for (int k = 0; k < 4; ++k) {
    VectorXd col = lam.col(k);
    if (k == 1) col = col.array().log();
    double loo0;
    REQUIRE(ols_with_loo(Psi0, {0}, col, nullptr, &loo0));
    CHECK(s1.pc[k].loo_error <= loo0 + 1e-12);
  }
}
