#include "testbed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numeric>

#include "sobol.hpp"

namespace gldemu {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Latent log-variances of the two lognormal factors; their sum 3/8 gives the
// response law LN(l(x), sqrt(3/8) cos x).
constexpr double kEx1Var1 = 0.125;
constexpr double kEx1Var2 = 0.25;

double example1_location(double x) { return std::log(std::sin(2.0 * kPi / 3.0 * x + kPi / 6.0)); }
double example1_scale(double x) { return std::sqrt(0.375) * std::cos(x); }

double example2_mean(const VectorXd& x) {
  double lin = 0.0, cub = 0.0, logarg = 0.0;
  for (int j = 0; j < 5; ++j) {
    const double w = j + 1.0;
    lin += w * x(j);
    cub += w * x(j) * x(j) * x(j);
    logarg += w * (x(j) * x(j) + std::pow(x(j), 4));
  }
  return 3.0 - lin + cub / 5.0 + std::log(1.0 + logarg) / 15.0 + x(0) * x(1) * x(1) -
         x(4) * x(2) + x(1) * x(3);
}

double example2_std(const VectorXd& x) { return std::exp(0.25 * x.sum()); }

}  // namespace

CaseId case_from_string(const std::string& s) {
  if (s == "example1") return CaseId::example1;
  if (s == "example2") return CaseId::example2;
  if (s == "sde") return CaseId::sde;
  throw InvalidArgument("unknown case '" + s + "' (expected example1, example2 or sde)");
}

std::string to_string(CaseId c) {
  switch (c) {
    case CaseId::example1: return "example1";
    case CaseId::example2: return "example2";
    case CaseId::sde: return "sde";
  }
  return "?";
}

CaseInfo case_info(CaseId c) {
  CaseInfo info;
  switch (c) {
    case CaseId::example1:
      info.dim = 1;
      info.input = InputModel({Marginal::Uniform(0.0, 1.0)});
      info.analytic_pdf = true;
      break;
    case CaseId::example2:
      info.dim = 5;
      info.input = InputModel(std::vector<Marginal>(5, Marginal::Uniform(0.0, 1.0)));
      info.analytic_pdf = true;
      break;
    case CaseId::sde:
      info.dim = 2;
      info.input = InputModel({Marginal::Uniform(0.9, 2.0), Marginal::Uniform(0.1, 1.0)});
      info.analytic_pdf = false;
      break;
  }
  return info;
}

int SdeConfig::steps() const {
  if (!(dt > 0.0) || !(horizon > 0.0)) throw InvalidArgument("SdeConfig: dt and horizon must be > 0");
  const double raw = horizon / dt;
  const int n = static_cast<int>(std::lround(raw));
  if (std::abs(raw - n) > 1e-9) throw InvalidArgument("SdeConfig: horizon/dt must be integral");
  return n;
}

double sde_euler_maruyama(double x1, double x2, const SdeConfig& cfg, Rng& rng) {
  const int n = cfg.steps();
  const double sqdt = std::sqrt(cfg.dt);
  double y = 0.0;
  for (int k = 0; k < n; ++k)
    y += (x1 - y) * cfg.dt + (cfg.nu * y + 1.0) * x2 * sqdt * rng.normal();
  return y;
}

namespace {

void check_support(const CaseInfo& info, const VectorXd& x) {
  if (x.size() != info.dim) throw DomainError("simulate: input dimension mismatch");
  for (int j = 0; j < info.dim; ++j) (void)info.input.to_standard(j, x(j));
}

}  // namespace

double simulate(CaseId c, const VectorXd& x, Rng& rng) {
  check_support(case_info(c), x);
  switch (c) {
    case CaseId::example1: {
      const double z1 = std::exp(std::sqrt(kEx1Var1) * rng.normal());
      const double z2 = std::exp(std::sqrt(kEx1Var2) * rng.normal());
      return std::sin(2.0 * kPi / 3.0 * x(0) + kPi / 6.0) * std::pow(z1 * z2, std::cos(x(0)));
    }
    case CaseId::example2:
      return example2_mean(x) + example2_std(x) * rng.normal();
    case CaseId::sde:
      return sde_euler_maruyama(x(0), x(1), SdeConfig{}, rng);
  }
  throw InvalidArgument("simulate: unknown case");
}

DensityHandle true_pdf(CaseId c, const VectorXd& x) {
  check_support(case_info(c), x);
  switch (c) {
    case CaseId::example1:
      return lognormal_density(example1_location(x(0)), example1_scale(x(0)));
    case CaseId::example2:
      return normal_density(example2_mean(x), example2_std(x));
    case CaseId::sde:
      throw DomainError("true_pdf: the SDE case has no analytic response PDF, use kde_reference");
  }
  throw InvalidArgument("true_pdf: unknown case");
}

MatrixXd design(DesignKind kind, int m, int n, const MatrixXd& bounds, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("design: n must be >= 1");
  if (bounds.rows() != m || bounds.cols() != 2)
    throw InvalidArgument("design: bounds must be M x 2");
  MatrixXd unit(n, m);
  if (kind == DesignKind::sobol) {
    unit = sobol_points(m, n);
  } else {
    Rng rng(seed);
    for (int j = 0; j < m; ++j) {
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = n - 1; i > 0; --i) {
        const int k = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[i], perm[k]);
      }
      for (int i = 0; i < n; ++i) unit(i, j) = (perm[i] + rng.uniform()) / n;
    }
  }
  MatrixXd pts(n, m);
  for (int j = 0; j < m; ++j) {
    const double lo = bounds(j, 0), hi = bounds(j, 1);
    if (!(lo < hi)) throw InvalidArgument("design: bounds must satisfy lower < upper");
    pts.col(j) = lo + (hi - lo) * unit.col(j).array();
  }
  return pts;
}

ReplicatedDesign run_replicated(CaseId c, const MatrixXd& points, int r, std::uint64_t seed) {
  if (r < 1) throw InvalidArgument("run_replicated: r must be >= 1");
  const CaseInfo info = case_info(c);
  MatrixXd Y(points.rows(), r);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const VectorXd x = points.row(i).transpose();
    // Substreams keyed by the point's coordinates, so reordering design rows
    // permutes the outputs identically.
    std::uint64_t h = splitmix64(seed ^ 0x474c44454d55ull);
    for (Eigen::Index j = 0; j < points.cols(); ++j)
      h = splitmix64(h ^ std::bit_cast<std::uint64_t>(points(i, j)));
    for (int k = 0; k < r; ++k) {
      Rng rng(substream_seed(h, 0, static_cast<std::uint64_t>(k)));
      Y(i, k) = simulate(c, x, rng);
    }
  }
  return make_design(points, std::move(Y), info.input, seed);
}

DensityHandle kde_reference(const std::vector<double>& sample, const std::vector<double>& grid) {
  const std::size_t n = sample.size();
  if (n < 30) throw InvalidArgument("kde_reference: need at least 30 observations");
  if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end()))
    throw InvalidArgument("kde_reference: grid must be sorted with at least 2 points");

  double mean = 0.0;
  for (const double y : sample) mean += y;
  mean /= n;
  double var = 0.0;
  for (const double y : sample) var += (y - mean) * (y - mean);
  var /= (n - 1);
  if (!(var > 0.0)) throw DataError("kde_reference: zero-variance sample");

  std::vector<double> sorted = sample;
  std::sort(sorted.begin(), sorted.end());
  const auto q = [&](double p) {
    const double pos = p * (n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - lo;
    return lo + 1 < n ? sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac : sorted[lo];
  };
  const double iqr = q(0.75) - q(0.25);
  const double sd = std::sqrt(var);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  const double h = 1.06 * spread * std::pow(static_cast<double>(n), -0.2);

  auto data = std::make_shared<std::vector<double>>(std::move(sorted));
  const double lo_brk = std::min(grid.front(), data->front() - 10.0 * h);
  const double hi_brk = std::max(grid.back(), data->back() + 10.0 * h);

  DensityHandle handle;
  handle.kind = DensityKind::kde;
  handle.pdf = [data, h, n](double y) {
    double s = 0.0;
    for (const double yi : *data) {
      const double t = (y - yi) / h;
      s += std::exp(-0.5 * t * t);
    }
    return s / (n * h * std::sqrt(2.0 * kPi));
  };
  auto cdf = [data, h, n](double y) {
    double s = 0.0;
    for (const double yi : *data) s += 0.5 * std::erfc(-(y - yi) / (h * std::sqrt(2.0)));
    return s / n;
  };
  handle.quantile = [cdf, lo_brk, hi_brk](double p) {
    double lo = lo_brk, hi = hi_brk;
    for (int it = 0; it < 200 && hi - lo > 1e-10 * std::max(1.0, std::abs(hi) + std::abs(lo));
         ++it) {
      const double mid = 0.5 * (lo + hi);
      if (cdf(mid) < p)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  return handle;
}

}  // namespace gldemu
