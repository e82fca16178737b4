#include "optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace gldemu {

NelderMeadResult nelder_mead(const std::function<double(const VectorXd&)>& f, const VectorXd& x0,
                             double step, double f_tol, int max_iter) {
  const int n = static_cast<int>(x0.size());
  std::vector<VectorXd> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (int i = 0; i < n; ++i) xs[i + 1](i) += step;
  for (int i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  auto order = [&] {
    std::vector<int> idx(n + 1);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    std::vector<VectorXd> xs2(n + 1);
    std::vector<double> fs2(n + 1);
    for (int i = 0; i <= n; ++i) {
      xs2[i] = xs[idx[i]];
      fs2[i] = fs[idx[i]];
    }
    xs.swap(xs2);
    fs.swap(fs2);
  };

  int it = 0;
  for (; it < max_iter; ++it) {
    order();
    if (std::isfinite(fs[n]) && fs[n] - fs[0] < f_tol) break;

    VectorXd centroid = VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += xs[i];
    centroid /= n;

    const VectorXd xr = centroid + (centroid - xs[n]);
    const double fr = f(xr);
    if (fr < fs[0]) {
      const VectorXd xe = centroid + 2.0 * (centroid - xs[n]);
      const double fe = f(xe);
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
    } else {
      const VectorXd xc = centroid + 0.5 * ((fr < fs[n] ? xr : xs[n]) - centroid);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[n])) {
        xs[n] = xc;
        fs[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  order();
  return {xs[0], fs[0], it};
}

namespace {

// Steihaug-Toint truncated CG for min g'p + 0.5 p'Bp, ||p|| <= radius.
VectorXd steihaug_cg(const Eigen::MatrixXd& B, const VectorXd& g, double radius) {
  const int n = static_cast<int>(g.size());
  VectorXd z = VectorXd::Zero(n);
  VectorXd r = g;
  VectorXd d = -g;
  const double g_norm = g.norm();
  if (g_norm < 1e-300) return z;
  const double tol = std::min(0.1, std::sqrt(g_norm)) * g_norm;

  auto to_boundary = [&](const VectorXd& zz, const VectorXd& dd) {
    const double a = dd.squaredNorm();
    const double b = 2.0 * zz.dot(dd);
    const double c = zz.squaredNorm() - radius * radius;
    const double tau = (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c))) / (2.0 * a);
    return VectorXd(zz + tau * dd);
  };

  for (int j = 0; j < 2 * n + 10; ++j) {
    const VectorXd Bd = B * d;
    const double dBd = d.dot(Bd);
    if (dBd <= 0.0) return to_boundary(z, d);
    const double alpha = r.squaredNorm() / dBd;
    if ((z + alpha * d).norm() >= radius) return to_boundary(z, d);
    z += alpha * d;
    const VectorXd r_new = r + alpha * Bd;
    if (r_new.norm() < tol) return z;
    const double beta = r_new.squaredNorm() / r.squaredNorm();
    r = r_new;
    d = -r + beta * d;
  }
  return z;
}

}  // namespace

TrustRegionResult trust_region_minimize(const ValueGradFn& f, const VectorXd& x0,
                                        const TrustRegionOptions& opts) {
  const int n = static_cast<int>(x0.size());
  TrustRegionResult res;
  res.x = x0;
  res.grad.resize(n);
  res.value = f(res.x, &res.grad);
  if (!std::isfinite(res.value))
    throw InvalidArgument("trust_region_minimize: starting point must have a finite objective");

  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
  double radius = opts.initial_radius;
  std::deque<double> accepted_values{res.value};
  bool scaled = false;

  int k = 0;
  for (; k < opts.max_iterations; ++k) {
    res.grad_norm = res.grad.lpNorm<Eigen::Infinity>();
    if (res.grad_norm <= opts.grad_tol * std::max(1.0, std::abs(res.value))) {
      res.converged = true;
      break;
    }

    const VectorXd p = steihaug_cg(B, res.grad, radius);
    const double p_norm = p.norm();
    if (p_norm < 1e-300) {
      res.converged = true;
      break;
    }

    VectorXd g_trial(n);
    const double f_trial = f(res.x + p, &g_trial);
    double rho;
    if (!std::isfinite(f_trial)) {
      res.saw_infinite_trial = true;
      rho = -1.0;
    } else {
      const double pred = -(res.grad.dot(p) + 0.5 * p.dot(B * p));
      const double ared = res.value - f_trial;
      rho = pred > 0.0 ? ared / pred : (ared > 0.0 ? 1.0 : -1.0);
      const VectorXd yv = g_trial - res.grad;
      // Shanno-Phua scaling of the initial model from the first curvature pair
      if (!scaled) {
        const double scale = yv.dot(p) / p.squaredNorm();
        if (std::isfinite(scale) && scale > 0.0) B *= scale;
        scaled = true;
      }
      // SR1 update from every finite trial, accepted or not
      const VectorXd rvec = yv - B * p;
      const double denom = rvec.dot(p);
      if (std::abs(denom) >= 1e-8 * p_norm * rvec.norm() && std::isfinite(denom)) {
        B += (rvec * rvec.transpose()) / denom;
      }
    }

    if (rho > 1e-4 && f_trial < res.value) {
      res.x += p;
      res.value = f_trial;
      res.grad = g_trial;
      if (opts.on_accept) opts.on_accept(k, res.value);
      accepted_values.push_back(res.value);
      if (static_cast<int>(accepted_values.size()) > opts.plateau_window + 1)
        accepted_values.pop_front();
      if (static_cast<int>(accepted_values.size()) == opts.plateau_window + 1) {
        const double drop = accepted_values.front() - accepted_values.back();
        if (drop < opts.plateau_rel_decrease * std::max(1.0, std::abs(accepted_values.back()))) {
          ++k;
          res.converged = true;
          break;
        }
      }
    }

    if (rho > 0.75 && p_norm > 0.8 * radius)
      radius = std::min(2.0 * radius, 1e8);
    else if (rho < 0.25)
      radius *= 0.25;
    if (radius < opts.min_radius) {
      ++k;
      break;
    }
  }
  res.iterations = k;
  res.grad_norm = res.grad.lpNorm<Eigen::Infinity>();
  return res;
}

// (1+1)-CMA-ES with the rank-one Cholesky covariance update and the smoothed
// one-fifth success rule. Infeasible (+inf) offspring count as failures and
// are never accepted. The adapted covariance is what lets the search walk
// along an active support constraint instead of stalling against it.
OnePlusOneEsResult one_plus_one_es(const std::function<double(const VectorXd&)>& f,
                                   const VectorXd& x0, double f0, double sigma0, int budget,
                                   Rng& rng) {
  const int n = static_cast<int>(x0.size());
  OnePlusOneEsResult res{x0, f0, 0};

  const double p_target = 2.0 / 11.0;
  const double c_p = 1.0 / 12.0;
  const double damping = 1.0 + n / 2.0;
  const double c_cov = 2.0 / (n * n + 6.0);
  const double ca = std::sqrt(1.0 - c_cov);

  double sigma = sigma0;
  double p_succ = p_target;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  VectorXd z(n), cand(n);

  int since_improvement = 0;
  for (int e = 0; e < budget && sigma > 1e-12 && since_improvement < 5000; ++e) {
    for (int i = 0; i < n; ++i) z(i) = rng.normal();
    const VectorXd az = A * z;
    cand = res.x + sigma * az;
    const double fc = f(cand);
    ++res.evaluations;
    const bool success = std::isfinite(fc) && fc <= res.value;

    p_succ = (1.0 - c_p) * p_succ + c_p * (success ? 1.0 : 0.0);
    sigma *= std::exp((p_succ - p_target) / (damping * (1.0 - p_target)));

    if (success) {
      res.x = cand;
      res.value = fc;
      since_improvement = 0;
      if (p_succ < 0.44) {
        const double z2 = z.squaredNorm();
        if (z2 > 0.0) {
          const double fac = (ca / z2) * (std::sqrt(1.0 + c_cov * z2 / (1.0 - c_cov)) - 1.0);
          A = ca * A + fac * az * z.transpose();
        }
      }
    } else {
      ++since_improvement;
    }
  }
  return res;
}

}  // namespace gldemu
