#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "metrics.hpp"
#include "rng.hpp"

namespace gldemu {

enum class CaseId { example1, example2, sde };

CaseId case_from_string(const std::string& s);
std::string to_string(CaseId c);

struct CaseInfo {
  int dim = 1;
  InputModel input;
  bool analytic_pdf = true;
};

CaseInfo case_info(CaseId c);

struct SdeConfig {
  double nu = 0.2;
  double dt = 0.01;
  double horizon = 10.0;

  int steps() const;  // horizon/dt, validated integral
};

// One Euler-Maruyama path of dY = (x1 - Y)dt + (nu Y + 1) x2 dW from Y0 = 0,
// returning Y at the horizon. No input-box validation (test hook).
double sde_euler_maruyama(double x1, double x2, const SdeConfig& cfg, Rng& rng);

// One stochastic-simulator draw at x; validates x against the case support.
double simulate(CaseId c, const VectorXd& x, Rng& rng);

// Analytic response density (example1: lognormal, example2: normal). Throws
// DomainError for the SDE case, which has no closed form.
DensityHandle true_pdf(CaseId c, const VectorXd& x);

enum class DesignKind { sobol, lhs };

// N x M design in the box given by bounds (M x 2: lower, upper columns).
// Sobol': first N points of the sequence (zero point skipped), seed unused.
// LHS: plain seeded Latin hypercube, one point per axis stratum.
MatrixXd design(DesignKind kind, int m, int n, const MatrixXd& bounds, std::uint64_t seed);

// Runs the simulator R times at every design point with independent
// per-(point, replication) substreams; deterministic and order independent.
ReplicatedDesign run_replicated(CaseId c, const MatrixXd& points, int r, std::uint64_t seed);

// Gaussian-kernel estimate with Silverman's bandwidth; quantiles are solved
// from the exact kernel CDF, bracketed by the supplied grid's span.
DensityHandle kde_reference(const std::vector<double>& sample, const std::vector<double>& grid);

}  // namespace gldemu
