#pragma once

#include <array>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace gldemu {

// Shape exponents below this magnitude are treated as zero and the analytic
// limit (u^l - 1)/l -> log(u) is used instead; this removes the removable
// singularity that otherwise destroys bisection and gradients.
inline constexpr double kShapeEps = 1e-8;

// FKML generalized lambda distribution parameters.
// lambda1: location, lambda2 > 0: inverse scale, lambda3/lambda4: shapes.
struct GldParams {
  GldParams(double l1, double l2, double l3, double l4);

  double lambda1;
  double lambda2;
  double lambda3;
  double lambda4;
};

struct SupportBounds {
  double lower;  // -inf when lambda3 <= 0
  double upper;  // +inf when lambda4 <= 0

  bool contains(double y) const { return y >= lower && y <= upper; }
};

// Raw moment integrals v_k of the shape function together with the first four
// standardized moments. Moments of order k > finite_up_to do not exist; the
// variance/kurtosis are set to +inf and the skewness to NaN in that case, and
// the corresponding v_k to NaN.
struct MomentSet {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  std::array<double, 4> v{};  // v_1..v_4
  int finite_up_to = 4;       // largest k with a finite k-th moment
};

// (u^lam - 1)/lam with the small-shape log limit. Well defined for u in
// [0, 1]; returns -inf at u = 0 when lam <= 0.
double shape_term(double u, double lam);

// Raw moment integral v_k of the shape function, in beta-function closed
// form. Requires l3 > -1/k and l4 > -1/k.
double shape_raw_moment(double l3, double l4, int k);

// Central moments m_k of the centred shape function t(u) = (u^l3-1)/l3 -
// ((1-u)^l4-1)/l4. Near a zero shape the central combinations of the v_k
// cancel catastrophically, so this switches to quadrature of t.
struct ShapeCentral {
  double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  double c2() const { return m2 - m1 * m1; }
};
ShapeCentral shape_central_moments(double l3, double l4, int kmax = 4);

// Quantile function Q(u). At u in {0,1} returns the (possibly infinite)
// support endpoint. Throws DomainError for u outside [0,1].
double quantile(const GldParams& p, double u);

SupportBounds support(const GldParams& p);

// Solves Q(u) = y by bisection on [0,1]; tol is on the u-interval width.
// Throws OutOfSupportError when y lies outside the closed support.
double inverse_cdf(const GldParams& p, double y, double tol = 1e-12, int max_iter = 200);

// Bisection on a caller-supplied bracket [lo, hi]; falls back to [0, 1] if
// the bracket does not enclose the root. No support check.
double bisect_u(const GldParams& p, double y, double lo, double hi, double tol = 1e-12,
                int max_iter = 200);

// Density; total on the reals (0 outside the open support, limit value of the
// density formula at finite boundary points).
double pdf(const GldParams& p, double y);

MomentSet moments(const GldParams& p);

// i.i.d. draws by inverse transform Q(U); deterministic given the stream.
std::vector<double> sample(const GldParams& p, std::size_t n, Rng& rng);

// Pooled negative log-likelihood of a sample; +inf when any observation lies
// outside the support.
double gld_nll(const GldParams& p, const std::vector<double>& sample);

// Per-observation negative log-likelihood and its total derivatives with
// respect to the four distribution parameters, combining the direct terms
// with the implicit derivatives of u = Q^{-1}(y).
struct ObsGrad {
  double nll;
  double u;
  std::array<double, 4> dl_dlam;
};

// u must already solve Q(u) = y and lie strictly inside (0, 1).
ObsGrad obs_grad(const GldParams& p, double u);

}  // namespace gldemu
