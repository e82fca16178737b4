#pragma once

#include <Eigen/Dense>
#include <functional>

#include "rng.hpp"

namespace gldemu {

using Eigen::VectorXd;

// Objective with optional gradient. When `grad` is non-null and the value is
// finite, the gradient must be filled. May return +inf for infeasible points.
using ValueGradFn = std::function<double(const VectorXd& x, VectorXd* grad)>;

struct NelderMeadResult {
  VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

// Derivative-free simplex search; +inf objective values are treated as worst.
NelderMeadResult nelder_mead(const std::function<double(const VectorXd&)>& f, const VectorXd& x0,
                             double step, double f_tol = 1e-12, int max_iter = 400);

struct TrustRegionOptions {
  int max_iterations = 500;
  // converged when ||g||_inf <= grad_tol * max(1, |f|)
  double grad_tol = 1e-6;
  // or when the relative decrease over `plateau_window` accepted steps stays
  // below `plateau_rel_decrease`
  double plateau_rel_decrease = 1e-10;
  int plateau_window = 5;
  double initial_radius = 1.0;
  double min_radius = 1e-13;
  std::function<void(int iteration, double value)> on_accept;
};

struct TrustRegionResult {
  VectorXd x;
  double value = 0.0;
  VectorXd grad;
  double grad_norm = 0.0;  // ||g||_inf at exit
  int iterations = 0;
  bool converged = false;
  bool saw_infinite_trial = false;
};

// Trust-region minimizer with an SR1 quasi-Newton model and a Steihaug-Toint
// CG subproblem solver. Only improving steps are accepted, so the iterate
// value is monotonically non-increasing. x0 must be feasible (finite value).
TrustRegionResult trust_region_minimize(const ValueGradFn& f, const VectorXd& x0,
                                        const TrustRegionOptions& opts = {});

struct OnePlusOneEsResult {
  VectorXd x;
  double value = 0.0;
  int evaluations = 0;
};

// (1+1) evolution strategy with rejection of infeasible (+inf) offspring and
// the one-fifth success rule for the step size.
OnePlusOneEsResult one_plus_one_es(const std::function<double(const VectorXd&)>& f,
                                   const VectorXd& x0, double f0, double sigma0, int budget,
                                   Rng& rng);

}  // namespace gldemu
