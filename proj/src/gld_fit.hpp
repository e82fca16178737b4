#pragma once

#include <functional>
#include <vector>

#include "gld.hpp"

namespace gldemu {

struct EmpiricalMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;  // standardized sample moment
  double kurtosis = 0.0;
  std::size_t n = 0;
};

// Requires n >= 4 (kurtosis needs four observations).
EmpiricalMoments empirical_moments(const std::vector<double>& sample);

// Method of moments: matches skewness/kurtosis over the shape box
// (-0.249, 30]^2 by multi-start simplex search, then recovers lambda2 and
// lambda1 exactly from the variance and mean relations.
GldParams fit_mm(const std::vector<double>& sample);

struct MleOptions {
  int max_iterations = 500;
  // invoked with the objective value after every accepted optimizer step
  std::function<void(double)> on_accept;
};

// Maximum likelihood: minimizes the numerically evaluated negative
// log-likelihood over (lambda1, log lambda2, lambda3, lambda4) with analytic
// gradients; candidates whose support excludes a data point are rejected.
GldParams fit_mle(const std::vector<double>& sample, const GldParams& init,
                  const MleOptions& opts = {});

}  // namespace gldemu
