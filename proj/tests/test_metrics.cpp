#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "metrics.hpp"

using namespace gldemu;

TEST_CASE("hellinger: identical densities give zero") {
  const auto g = gld_density(GldParams(0.3, 1.2, 0.1, 0.8));
  CHECK(hellinger(g, g) <= 1e-6);
  const auto n = normal_density(1.0, 2.0);
  CHECK(hellinger(n, n) <= 1e-6);
  const auto ln = lognormal_density(0.0, 0.5);
  CHECK(hellinger(ln, ln) <= 1e-6);
}

TEST_CASE("hellinger: closed-form Gaussian value") {
  const double expected = std::sqrt(1.0 - std::exp(-1.0 / 8.0));  // 0.342787...
  CHECK(hellinger(normal_density(0, 1), normal_density(1, 1)) ==
        doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("hellinger: disjoint supports give one") {
  const auto u01 = gld_density(GldParams(0.5, 2, 1, 1));  // U(0,1)
  const auto u23 = gld_density(GldParams(2.5, 2, 1, 1));  // U(2,3)
  CHECK(hellinger(u01, u23) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("hellinger: symmetry and triangle inequality spot checks") {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const GldParams a(rng.uniform(-1, 1), rng.uniform(0.5, 2), rng.uniform(-0.2, 1.5),
                      rng.uniform(-0.2, 1.5));
    const GldParams b(rng.uniform(-1, 1), rng.uniform(0.5, 2), rng.uniform(-0.2, 1.5),
                      rng.uniform(-0.2, 1.5));
    const GldParams c(rng.uniform(-1, 1), rng.uniform(0.5, 2), rng.uniform(-0.2, 1.5),
                      rng.uniform(-0.2, 1.5));
    const auto da = gld_density(a), db = gld_density(b), dc = gld_density(c);
    CHECK(std::abs(hellinger(da, db) - hellinger(db, da)) <= 1e-8);
    CHECK(hellinger(da, dc) <= hellinger(da, db) + hellinger(db, dc) + 1e-6);
  }
}

TEST_CASE("hellinger and KS both positive for distinct GLDs") {
  const GldParams a(0, 1, 0.3, 0.3);
  const GldParams b(0.002, 1, 0.3, 0.3);  // location shifted by 2e-3
  CHECK(hellinger(gld_density(a), gld_density(b)) > 0.0);
  std::vector<double> grid;
  for (int k = 0; k <= 512; ++k) grid.push_back(-4.0 + 8.0 * k / 512.0);
  const double ks = ks_distance([&](double y) { return testutil::gld_cdf(a, y); },
                                [&](double y) { return testutil::gld_cdf(b, y); }, grid);
  CHECK(ks > 0.0);
}

TEST_CASE("ks_distance examples") {
  std::vector<double> grid;
  for (int k = 0; k <= 600; ++k) grid.push_back(-0.25 + 2.0 * k / 600.0);

  const auto f = [](double y) { return std::clamp(y, 0.0, 1.0); };  // U(0,1) CDF
  CHECK(ks_distance(f, f, grid) == 0.0);

  const auto g = [](double y) { return std::clamp(y - 0.5, 0.0, 1.0); };  // U(0.5,1.5)
  CHECK(ks_distance(f, g, grid) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(ks_distance(f, g, {0.75}) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(ks_distance(f, g, {1.0, 0.0}), InvalidArgument);  // unsorted
}

TEST_CASE("nmse examples and error paths") {
  const std::vector<double> ref{1.0, 2.0, 3.0, 4.0};
  CHECK(nmse(ref, ref) == 0.0);

  const std::vector<double> at_mean(4, 2.5);
  CHECK(nmse(at_mean, ref) == doctest::Approx(1.0).epsilon(1e-12));

  const double c = 0.7;
  std::vector<double> shifted = ref;
  for (auto& v : shifted) v += c;
  double denom = 0.0;
  for (const double v : ref) denom += (v - 2.5) * (v - 2.5);
  CHECK(nmse(shifted, ref) == doctest::Approx(4.0 * c * c / denom).epsilon(1e-12));

  CHECK_THROWS_AS(nmse({1.0, 2.0}, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(nmse({1.0, 2.0}, {3.0, 3.0}), MetricError);
}

namespace {

LambdaSurrogate constant_surrogate(const GldParams& p) {
  const InputModel im({Marginal::Uniform(0.0, 1.0)});
  LambdaSurrogate s;
  s.input = im;
  const double vals[4] = {p.lambda1, std::log(p.lambda2), p.lambda3, p.lambda4};
  for (int k = 0; k < 4; ++k) {
    s.pc[k].input = im;
    s.pc[k].set = constant_set(1);
    s.pc[k].coefficients = VectorXd::Constant(1, vals[k]);
  }
  return s;
}

}  // namespace

TEST_CASE("mean_hellinger: self-reference is zero and permutation invariant") {
  const LambdaSurrogate s = constant_surrogate(GldParams(0.5, 1.5, 0.2, 0.4));
  const auto self_ref = [&](const VectorXd& x) { return gld_density(s.params_at(x)); };

  MatrixXd pts(5, 1);
  pts << 0.1, 0.3, 0.5, 0.7, 0.9;
  const ErrorReport r = mean_hellinger(s, self_ref, pts);
  CHECK(r.mean_hellinger <= 1e-6);
  REQUIRE(r.hellinger_per_point.size() == 5);

  MatrixXd perm(5, 1);
  perm << 0.9, 0.7, 0.5, 0.3, 0.1;
  const ErrorReport r2 = mean_hellinger(s, self_ref, perm);
  CHECK(r2.mean_hellinger == doctest::Approx(r.mean_hellinger).epsilon(1e-12));
}
