#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gld_fit.hpp"
#include "helpers.hpp"
#include "metrics.hpp"

using namespace gldemu;

TEST_CASE("fit_mm on uniform draws reproduces the four moments") {
  Rng rng(101);
  const auto ys = sample(GldParams(0, 1, 1, 1), 100000, rng);
  const EmpiricalMoments em = empirical_moments(ys);
  const GldParams fit = fit_mm(ys);
  const MomentSet fm = moments(fit);

  CHECK(fm.mean == doctest::Approx(em.mean).epsilon(1e-8));
  CHECK(fm.variance == doctest::Approx(em.variance).epsilon(1e-8));
  // skew/kurt within sampling error of the analytic uniform values
  CHECK(std::abs(fm.skewness) < 0.05);
  CHECK(std::abs(fm.kurtosis - 1.8) < 0.1);
  // and essentially exact against the empirical targets
  CHECK(fm.skewness == doctest::Approx(em.skewness).epsilon(1e-4));
  CHECK(fm.kurtosis == doctest::Approx(em.kurtosis).epsilon(1e-4));
}

TEST_CASE("fit_mm stays on the symmetric manifold for symmetric samples") {
  Rng rng(55);
  std::vector<double> ys;
  for (int i = 0; i < 400; ++i) {
    const double v = rng.uniform(0.05, 1.0);
    ys.push_back(v);
    ys.push_back(-v);
  }
  const EmpiricalMoments em = empirical_moments(ys);
  CHECK(em.skewness == 0.0);  // exact by pairing
  const GldParams fit = fit_mm(ys);
  CHECK(fit.lambda3 == fit.lambda4);
}

TEST_CASE("fit_mm respects the shape box") {
  Rng rng(77);
  // heavy-tailed source: shapes at the moment-existence boundary
  const auto ys = sample(GldParams(0, 1, -0.24, -0.24), 2000, rng);
  const GldParams fit = fit_mm(ys);
  CHECK(fit.lambda3 > -0.25);
  CHECK(fit.lambda4 > -0.25);
  CHECK(fit.lambda3 <= 2.5);
  CHECK(fit.lambda4 <= 2.5);
}

TEST_CASE("fit_mm location-scale equivariance") {
  Rng rng(202);
  std::vector<double> ys(500);
  for (auto& y : ys) y = std::exp(0.4 * rng.normal());
  const GldParams f1 = fit_mm(ys);

  const double a = 2.5, b = -3.0;
  std::vector<double> zs(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) zs[i] = a * ys[i] + b;
  const GldParams f2 = fit_mm(zs);

  CHECK(f2.lambda3 == doctest::Approx(f1.lambda3).epsilon(1e-6));
  CHECK(f2.lambda4 == doctest::Approx(f1.lambda4).epsilon(1e-6));
  CHECK(f2.lambda2 == doctest::Approx(f1.lambda2 / a).epsilon(1e-6));
  CHECK(f2.lambda1 == doctest::Approx(a * f1.lambda1 + b).epsilon(1e-6));
}

TEST_CASE("fits are invariant to sample permutation") {
  Rng rng(303);
  auto ys = sample(GldParams(1, 2, 0.3, 0.7), 300, rng);
  const GldParams f1 = fit_mm(ys);
  const GldParams g1 = fit_mle(ys, f1);
  std::reverse(ys.begin(), ys.end());
  std::swap(ys[0], ys[131]);
  const GldParams f2 = fit_mm(ys);
  const GldParams g2 = fit_mle(ys, f2);
  CHECK(f1.lambda1 == f2.lambda1);
  CHECK(f1.lambda2 == f2.lambda2);
  CHECK(f1.lambda3 == f2.lambda3);
  CHECK(f1.lambda4 == f2.lambda4);
  CHECK(g1.lambda1 == g2.lambda1);
  CHECK(g1.lambda2 == g2.lambda2);
  CHECK(g1.lambda3 == g2.lambda3);
  CHECK(g1.lambda4 == g2.lambda4);
}

TEST_CASE("fit_mm error paths") {
  CHECK_THROWS_AS(fit_mm({1.0, 2.0, 3.0}), InvalidArgument);          // n < 4
  CHECK_THROWS_AS(fit_mm({2.0, 2.0, 2.0, 2.0, 2.0}), DataError);      // zero variance
}

TEST_CASE("single-observation NLL matches the uniform density") {
  CHECK(gld_nll(GldParams(0, 1, 1, 1), {0.0}) == doctest::Approx(-std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("fit_mle reaches at least the true-parameter likelihood") {
  Rng rng(404);
  const GldParams truth(0, 1, 0.4, 0.4);
  const auto ys = sample(truth, 10000, rng);
  const GldParams init = fit_mm(ys);
  const GldParams fit = fit_mle(ys, init);
  CHECK(gld_nll(fit, ys) <= gld_nll(truth, ys) + 1e-6);
}

TEST_CASE("fit_mle acceptance history decreases monotonically") {
  Rng rng(505);
  const auto ys = sample(GldParams(2, 0.5, 0.1, 1.2), 500, rng);
  std::vector<double> history;
  MleOptions opts;
  opts.on_accept = [&](double v) { history.push_back(v); };
  (void)fit_mle(ys, fit_mm(ys), opts);
  REQUIRE(history.size() > 1);
  for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1]);
}

TEST_CASE("fitted GLD approximates a lognormal to small Hellinger distance") {
  Rng rng(606);
  std::vector<double> ys(10000);
  for (auto& y : ys) y = std::exp(0.5 * rng.normal());
  const GldParams fit = fit_mle(ys, fit_mm(ys));
  const double d = hellinger(gld_density(fit), lognormal_density(0.0, 0.5));
  CHECK(d < 0.05);
}
