#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "gld.hpp"
#include "surrogate.hpp"

namespace gldemu {

enum class DensityKind { analytic, gld, kde };

// Evaluatable density with quantiles; the unit the distance metrics consume.
struct DensityHandle {
  std::function<double(double)> pdf;
  std::function<double(double)> quantile;  // q in (0, 1)
  // density evaluated at its own quantile, as a function of the level u;
  // equals pdf(quantile(u)) but avoids the inner root solve when a direct
  // formula exists (GLD)
  std::function<double(double)> pdf_at_quantile;
  // support endpoints when known; quadrature splits at the finite ones
  double support_lower = -std::numeric_limits<double>::infinity();
  double support_upper = std::numeric_limits<double>::infinity();
  DensityKind kind = DensityKind::analytic;
};

DensityHandle gld_density(const GldParams& p);
DensityHandle normal_density(double mu, double sigma);
DensityHandle lognormal_density(double log_location, double log_scale);

// Hellinger distance sqrt(1 - int sqrt(p q)), integrated over the union of
// the two central 99.8% quantile intervals; clamped to [0, 1].
double hellinger(const DensityHandle& p, const DensityHandle& q);

struct ErrorReport {
  std::vector<double> hellinger_per_point;
  double mean_hellinger = 0.0;
  std::vector<double> ks_per_point;              // optional
  std::vector<std::pair<std::string, double>> nmse_per_statistic;  // optional
};

// Average Hellinger distance between the emulated conditional density and a
// reference over a set of test points.
ErrorReport mean_hellinger(const LambdaSurrogate& s,
                           const std::function<DensityHandle(const VectorXd&)>& reference,
                           const MatrixXd& test_points);

// max |F_p - F_q| over the (sorted) grid.
double ks_distance(const std::function<double(double)>& cdf_p,
                   const std::function<double(double)>& cdf_q, const std::vector<double>& grid);

// Mean squared error normalized by the reference's variance about its mean.
double nmse(const std::vector<double>& predicted, const std::vector<double>& reference);

}  // namespace gldemu
