#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace gldemu {

// Adaptive Gauss-Kronrod on [a, b]. Suited to piecewise-smooth integrands
// with interior kinks (e.g. overlapping density supports).
template <typename F>
double integrate_gk(F&& f, double a, double b, double abs_tol = 1e-8) {
  if (!(a < b)) return 0.0;
  double error = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, 15, abs_tol, &error);
  return value;
}

// tanh-sinh on (a, b); handles integrable endpoint singularities, which occur
// in shape-function integrals with negative exponents.
template <typename F>
double integrate_ts(F&& f, double a, double b, double tol = 1e-10) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(std::forward<F>(f), a, b, tol);
}

}  // namespace gldemu
