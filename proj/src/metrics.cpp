#include "metrics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/lognormal.hpp>
#include <boost/math/distributions/normal.hpp>

#include "quadrature.hpp"

namespace gldemu {

DensityHandle gld_density(const GldParams& p) {
  DensityHandle h;
  h.kind = DensityKind::gld;
  h.pdf = [p](double y) { return pdf(p, y); };
  h.quantile = [p](double q) { return quantile(p, q); };
  h.pdf_at_quantile = [p](double u) {
    const double den = std::pow(u, p.lambda3 - 1.0) + std::pow(1.0 - u, p.lambda4 - 1.0);
    return p.lambda2 / den;
  };
  const SupportBounds b = support(p);
  h.support_lower = b.lower;
  h.support_upper = b.upper;
  return h;
}

DensityHandle normal_density(double mu, double sigma) {
  const boost::math::normal_distribution<double> dist(mu, sigma);
  DensityHandle h;
  h.kind = DensityKind::analytic;
  h.pdf = [dist](double y) { return std::isfinite(y) ? boost::math::pdf(dist, y) : 0.0; };
  h.quantile = [dist](double q) { return boost::math::quantile(dist, q); };
  h.pdf_at_quantile = [h](double u) { return h.pdf(h.quantile(u)); };
  return h;
}

DensityHandle lognormal_density(double log_location, double log_scale) {
  const boost::math::lognormal_distribution<double> dist(log_location, log_scale);
  DensityHandle h;
  h.kind = DensityKind::analytic;
  h.pdf = [dist](double y) {
    return std::isfinite(y) && y > 0.0 ? boost::math::pdf(dist, y) : 0.0;
  };
  h.quantile = [dist](double q) { return boost::math::quantile(dist, q); };
  h.pdf_at_quantile = [h](double u) { return h.pdf(h.quantile(u)); };
  h.support_lower = 0.0;
  return h;
}

double hellinger(const DensityHandle& p, const DensityHandle& q) {
  if (!(p.quantile(0.001) < p.quantile(0.999)) || !(q.quantile(0.001) < q.quantile(0.999)))
    throw MetricError("hellinger: invalid quantile interval");

  // The overlap integral is computed in the quantile domain of one density:
  // with y = Q_b(u) and f_b(Q_b(u)) du = dy,
  //   int sqrt(f_b f_o) dy = int_0^1 sqrt(f_o(Q_b(u)) / f_b(Q_b(u))) du.
  // This covers the full mass of the base density (no truncation floor: an
  // omitted tail of mass m would inflate the distance by sqrt(m)), and the
  // double-exponential rule absorbs the endpoint singularities. Base side:
  // prefer the handle whose quantile/density pair is cheapest to evaluate.
  const auto rank = [](const DensityHandle& h) {
    switch (h.kind) {
      case DensityKind::gld: return 0;
      case DensityKind::analytic: return 1;
      case DensityKind::kde: return 2;
    }
    return 3;
  };
  const DensityHandle& base = rank(q) < rank(p) ? q : p;
  const DensityHandle& other = rank(q) < rank(p) ? p : q;

  const auto integrand = [&](double u) {
    const double y = base.quantile(u);
    if (!std::isfinite(y)) return 0.0;
    const double fo = other.pdf(y);
    if (!(fo > 0.0)) return 0.0;
    const double fb = base.pdf_at_quantile ? base.pdf_at_quantile(u) : base.pdf(y);
    if (!(fb > 0.0) || !std::isfinite(fb)) return 0.0;
    return std::sqrt(fo / fb);
  };

  // Split at the u-levels where the other density's support begins or ends;
  // the integrand has a kink or jump there.
  std::vector<double> cuts{0.0, 1.0};
  for (const double bound : {other.support_lower, other.support_upper}) {
    if (!std::isfinite(bound)) continue;
    double lo = 0.0, hi = 1.0;
    if (!(base.quantile(1e-15) <= bound) || !(base.quantile(1.0 - 1e-15) >= bound)) continue;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (base.quantile(mid) < bound)
        lo = mid;
      else
        hi = mid;
    }
    cuts.push_back(0.5 * (lo + hi));
  }
  std::sort(cuts.begin(), cuts.end());

  double overlap = 0.0;
  try {
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      if (cuts[k + 1] > cuts[k]) overlap += integrate_ts(integrand, cuts[k], cuts[k + 1], 1e-10);
  } catch (const std::exception& e) {
    throw MetricError(std::string("hellinger: quadrature failed: ") + e.what());
  }
  if (!std::isfinite(overlap)) throw MetricError("hellinger: quadrature returned non-finite value");
  return std::sqrt(std::clamp(1.0 - overlap, 0.0, 1.0));
}

ErrorReport mean_hellinger(const LambdaSurrogate& s,
                           const std::function<DensityHandle(const VectorXd&)>& reference,
                           const MatrixXd& test_points) {
  ErrorReport rep;
  rep.hellinger_per_point.reserve(test_points.rows());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < test_points.rows(); ++i) {
    const VectorXd x = test_points.row(i).transpose();
    const double d = hellinger(gld_density(s.params_at(x)), reference(x));
    rep.hellinger_per_point.push_back(d);
    sum += d;
  }
  rep.mean_hellinger = test_points.rows() > 0 ? sum / test_points.rows() : 0.0;
  return rep;
}

double ks_distance(const std::function<double(double)>& cdf_p,
                   const std::function<double(double)>& cdf_q, const std::vector<double>& grid) {
  if (grid.empty()) throw InvalidArgument("ks_distance: empty grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw InvalidArgument("ks_distance: grid must be sorted");
  double d = 0.0;
  for (const double y : grid) d = std::max(d, std::abs(cdf_p(y) - cdf_q(y)));
  return d;
}

double nmse(const std::vector<double>& predicted, const std::vector<double>& reference) {
  if (predicted.size() != reference.size() || predicted.size() < 2)
    throw InvalidArgument("nmse: need two equal-length vectors with n >= 2");
  double mean = 0.0;
  for (const double v : reference) mean += v;
  mean /= reference.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    num += (predicted[i] - reference[i]) * (predicted[i] - reference[i]);
    den += (reference[i] - mean) * (reference[i] - mean);
  }
  if (!(den > 0.0)) throw MetricError("nmse: reference statistic is constant");
  return num / den;
}

}  // namespace gldemu
