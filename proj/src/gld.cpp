#include "gld.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quadrature.hpp"

namespace gldemu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

}  // namespace

GldParams::GldParams(double l1, double l2, double l3, double l4)
    : lambda1(l1), lambda2(l2), lambda3(l3), lambda4(l4) {
  if (!(l2 > 0.0) || !std::isfinite(l1) || !std::isfinite(l2) || !std::isfinite(l3) ||
      !std::isfinite(l4)) {
    throw InvalidArgument("GldParams: lambda2 must be > 0 and all parameters finite");
  }
}

double shape_term(double u, double lam) {
  if (std::abs(lam) < kShapeEps) return std::log(u);
  return (std::pow(u, lam) - 1.0) / lam;
}

double shape_raw_moment(double l3, double l4, int k) {
  double vk = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    vk += sign * binomial(k, j) * beta_fn(l3 * (k - j) + 1.0, l4 * j + 1.0) /
          (std::pow(l3, k - j) * std::pow(l4, j));
  }
  return vk;
}

ShapeCentral shape_central_moments(double l3, double l4, int kmax) {
  ShapeCentral c;
  if (std::min(std::abs(l3), std::abs(l4)) < 1e-2) {
    const auto t = [&](double u) { return shape_term(u, l3) - shape_term(1.0 - u, l4); };
    c.m1 = integrate_ts([&](double u) { return t(u); }, 0.0, 1.0);
    c.m2 = integrate_ts([&](double u) { const double s = t(u); return s * s; }, 0.0, 1.0);
    if (kmax >= 3)
      c.m3 = integrate_ts([&](double u) { const double s = t(u); return s * s * s; }, 0.0, 1.0);
    if (kmax >= 4)
      c.m4 = integrate_ts([&](double u) { const double s = t(u); return s * s * s * s; }, 0.0, 1.0);
  } else {
    c.m1 = shape_raw_moment(l3, l4, 1);
    c.m2 = shape_raw_moment(l3, l4, 2);
    if (kmax >= 3) c.m3 = shape_raw_moment(l3, l4, 3);
    if (kmax >= 4) c.m4 = shape_raw_moment(l3, l4, 4);
  }
  return c;
}

double quantile(const GldParams& p, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile: u must lie in [0,1]");
  return p.lambda1 + (shape_term(u, p.lambda3) - shape_term(1.0 - u, p.lambda4)) / p.lambda2;
}

SupportBounds support(const GldParams& p) {
  SupportBounds b;
  b.lower = p.lambda3 > 0.0 ? p.lambda1 - 1.0 / (p.lambda2 * p.lambda3) : -kInf;
  b.upper = p.lambda4 > 0.0 ? p.lambda1 + 1.0 / (p.lambda2 * p.lambda4) : kInf;
  return b;
}

double bisect_u(const GldParams& p, double y, double lo, double hi, double tol, int max_iter) {
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  if (!(lo < hi) || quantile(p, lo) > y || quantile(p, hi) < y) {
    lo = 0.0;
    hi = 1.0;
  }
  // Bracketed bisection with Newton acceleration: the Newton step is taken
  // whenever it stays inside the bracket, otherwise the interval is halved.
  // Q'(u) = (u^(l3-1) + (1-u)^(l4-1)) / l2, valid in the small-shape limit
  // as well.
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double f = quantile(p, u) - y;
    if (f < 0.0)
      lo = u;
    else
      hi = u;
    const double dq = (std::pow(u, p.lambda3 - 1.0) + std::pow(1.0 - u, p.lambda4 - 1.0)) /
                      p.lambda2;
    double u_next = u - f / dq;
    if (!std::isfinite(u_next) || u_next <= lo || u_next >= hi)
      u_next = 0.5 * (lo + hi);
    else if (std::abs(u_next - u) <= 0.25 * tol)
      return u_next;
    u = u_next;
  }
  return std::clamp(u, lo, hi);
}

double inverse_cdf(const GldParams& p, double y, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("inverse_cdf: tol must be > 0");
  const SupportBounds b = support(p);
  if (y < b.lower) throw OutOfSupportError(y, b.lower, true, "inverse_cdf: y below lower support bound");
  if (y > b.upper) throw OutOfSupportError(y, b.upper, false, "inverse_cdf: y above upper support bound");
  if (y == b.lower) return 0.0;
  if (y == b.upper) return 1.0;
  return bisect_u(p, y, 0.0, 1.0, tol, max_iter);
}

double pdf(const GldParams& p, double y) {
  const SupportBounds b = support(p);
  if (y < b.lower || y > b.upper || !std::isfinite(y)) return 0.0;
  double u;
  if (y == b.lower)
    u = 0.0;
  else if (y == b.upper)
    u = 1.0;
  else
    u = bisect_u(p, y, 0.0, 1.0, 1e-13);
  const double den = std::pow(u, p.lambda3 - 1.0) + std::pow(1.0 - u, p.lambda4 - 1.0);
  return p.lambda2 / den;  // den = +inf gives 0
}

MomentSet moments(const GldParams& p) {
  const double l2 = p.lambda2, l3 = p.lambda3, l4 = p.lambda4;
  MomentSet m;
  int kmax = 0;
  for (int k = 1; k <= 4; ++k) {
    if (l3 > -1.0 / k && l4 > -1.0 / k)
      kmax = k;
    else
      break;
  }
  m.finite_up_to = kmax;
  m.v.fill(kNaN);
  for (int k = 1; k <= kmax; ++k) m.v[k - 1] = shape_raw_moment(l3, l4, k);

  m.mean = kmax >= 1 ? p.lambda1 - (1.0 / (l3 + 1.0) - 1.0 / (l4 + 1.0)) / l2 : kNaN;
  m.variance = kInf;
  m.skewness = kNaN;
  m.kurtosis = kInf;

  if (kmax >= 2) {
    const ShapeCentral c = shape_central_moments(l3, l4, kmax);
    const double c2 = c.c2();
    m.variance = c2 / (l2 * l2);
    if (kmax >= 3)
      m.skewness = (c.m3 - 3.0 * c.m1 * c.m2 + 2.0 * c.m1 * c.m1 * c.m1) / std::pow(c2, 1.5);
    if (kmax >= 4)
      m.kurtosis =
          (c.m4 - 4.0 * c.m1 * c.m3 + 6.0 * c.m1 * c.m1 * c.m2 - 3.0 * std::pow(c.m1, 4)) /
          (c2 * c2);
  }
  return m;
}

std::vector<double> sample(const GldParams& p, std::size_t n, Rng& rng) {
  if (n < 1) throw InvalidArgument("sample: n must be >= 1");
  std::vector<double> out(n);
  for (auto& y : out) y = quantile(p, rng.uniform());
  return out;
}

double gld_nll(const GldParams& p, const std::vector<double>& sample) {
  const SupportBounds b = support(p);
  const double log_l2 = std::log(p.lambda2);
  double nll = 0.0;
  for (const double y : sample) {
    if (y < b.lower || y > b.upper) return kInf;
    double u;
    if (y == b.lower)
      u = 0.0;
    else if (y == b.upper)
      u = 1.0;
    else
      u = bisect_u(p, y, 0.0, 1.0, 1e-13);
    const double log_a = (p.lambda3 - 1.0) * std::log(u);
    const double log_b = (p.lambda4 - 1.0) * std::log1p(-u);
    nll += log_sum_exp(log_a, log_b) - log_l2;
    if (!std::isfinite(nll)) return kInf;
  }
  return nll;
}

ObsGrad obs_grad(const GldParams& p, double u) {
  const double l2 = p.lambda2, l3 = p.lambda3, l4 = p.lambda4;
  const double lu = std::log(u);
  const double l1mu = std::log1p(-u);
  const double log_a = (l3 - 1.0) * lu;
  const double log_b = (l4 - 1.0) * l1mu;
  const double log_d = log_sum_exp(log_a, log_b);
  const double wa = std::exp(log_a - log_d);  // u^(l3-1) / D
  const double wb = std::exp(log_b - log_d);  // (1-u)^(l4-1) / D
  const double inv_d = std::exp(-log_d);

  ObsGrad g;
  g.u = u;
  g.nll = log_d - std::log(l2);

  const double dldu = (l3 - 1.0) * wa / u - (l4 - 1.0) * wb / (1.0 - u);
  const double dldl2 = -1.0 / l2;
  const double dldl3 = wa * lu;
  const double dldl4 = wb * l1mu;

  const double dudl1 = -l2 * inv_d;
  const double y_minus_l1 = (shape_term(u, l3) - shape_term(1.0 - u, l4)) / l2;
  const double dudl2 = y_minus_l1 * inv_d;
  double dudl3, dudl4;
  if (std::abs(l3) < kShapeEps) {
    dudl3 = -0.5 * lu * lu * inv_d;
  } else {
    // (u^l3 - l3 u^l3 log u - 1) / (l3^2 D), with u^l3 / D = u * wa
    dudl3 = (u * wa * (1.0 - l3 * lu) - inv_d) / (l3 * l3);
  }
  if (std::abs(l4) < kShapeEps) {
    dudl4 = 0.5 * l1mu * l1mu * inv_d;
  } else {
    dudl4 = ((1.0 - u) * wb * (l4 * l1mu - 1.0) + inv_d) / (l4 * l4);
  }

  g.dl_dlam[0] = dldu * dudl1;
  g.dl_dlam[1] = dldl2 + dldu * dudl2;
  g.dl_dlam[2] = dldl3 + dldu * dudl3;
  g.dl_dlam[3] = dldl4 + dldu * dudl4;
  return g;
}

}  // namespace gldemu
