#include "pce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gldemu {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

InputModel::InputModel(std::vector<Marginal> ms) : marginals(std::move(ms)) {
  if (marginals.empty()) throw InvalidArgument("InputModel: dimension must be >= 1");
}

double InputModel::to_standard(int j, double x) const {
  const Marginal& m = marginals.at(j);
  if (m.kind == MarginalKind::gaussian) return x;
  const double slack = 1e-12 * (m.upper - m.lower);
  if (x < m.lower - slack || x > m.upper + slack)
    throw DomainError("input coordinate outside marginal support");
  const double z = 2.0 * (x - m.lower) / (m.upper - m.lower) - 1.0;
  return std::clamp(z, -1.0, 1.0);
}

namespace {

void enumerate_degree(int m, int d, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
  if (pos == m - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur[pos] = k;
    enumerate_degree(m, d - k, cur, pos + 1, out);
  }
}

}  // namespace

MultiIndexSet total_degree_set(int m, int p) {
  if (m < 1 || p < 0) throw InvalidArgument("total_degree_set: m >= 1 and p >= 0 required");
  MultiIndexSet set;
  set.dim = m;
  MultiIndex cur(m, 0);
  for (int d = 0; d <= p; ++d) enumerate_degree(m, d, cur, 0, set.indices);
  return set;
}

MultiIndexSet constant_set(int m) {
  MultiIndexSet set;
  set.dim = m;
  set.indices.push_back(MultiIndex(m, 0));
  return set;
}

void legendre_orthonormal(double z, int n, double* out) {
  double pm1 = 1.0, p0 = z;
  out[0] = 1.0;
  if (n >= 1) out[1] = std::sqrt(3.0) * z;
  for (int k = 1; k < n; ++k) {
    const double pk = ((2.0 * k + 1.0) * z * p0 - k * pm1) / (k + 1.0);
    out[k + 1] = std::sqrt(2.0 * k + 3.0) * pk;
    pm1 = p0;
    p0 = pk;
  }
}

void hermite_orthonormal(double z, int n, double* out) {
  double hm1 = 1.0, h0 = z;
  double fact = 1.0;
  out[0] = 1.0;
  if (n >= 1) out[1] = z;
  for (int k = 1; k < n; ++k) {
    const double hk = z * h0 - k * hm1;
    fact *= (k + 1.0);
    out[k + 1] = hk / std::sqrt(fact);
    hm1 = h0;
    h0 = hk;
  }
}

namespace {

// Per-dimension tables of univariate values up to the max degree used.
void univariate_tables(const InputModel& im, const MultiIndexSet& A, const VectorXd& x,
                       std::vector<std::vector<double>>& tables) {
  const int m = im.dim();
  tables.assign(m, {});
  for (int j = 0; j < m; ++j) {
    int deg = 0;
    for (const auto& a : A.indices) deg = std::max(deg, a[j]);
    tables[j].resize(deg + 1);
    const double z = im.to_standard(j, x(j));
    if (im.marginals[j].kind == MarginalKind::uniform)
      legendre_orthonormal(z, deg, tables[j].data());
    else
      hermite_orthonormal(z, deg, tables[j].data());
  }
}

}  // namespace

VectorXd eval_basis(const InputModel& im, const MultiIndexSet& A, const VectorXd& x) {
  if (x.size() != im.dim() || A.dim != im.dim())
    throw InvalidArgument("eval_basis: dimension mismatch");
  std::vector<std::vector<double>> tables;
  univariate_tables(im, A, x, tables);
  VectorXd psi(A.size());
  for (std::size_t k = 0; k < A.size(); ++k) {
    double v = 1.0;
    for (int j = 0; j < im.dim(); ++j) v *= tables[j][A.indices[k][j]];
    psi(k) = v;
  }
  return psi;
}

MatrixXd basis_matrix(const InputModel& im, const MultiIndexSet& A, const MatrixXd& X) {
  MatrixXd Psi(X.rows(), static_cast<Eigen::Index>(A.size()));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    Psi.row(i) = eval_basis(im, A, X.row(i).transpose()).transpose();
  return Psi;
}

double PceModel::eval(const VectorXd& x) const {
  return eval_basis(input, set, x).dot(coefficients);
}

// LAR on centred, unit-norm columns; the intercept (column 0) is excluded
// from the path and prepended to every active set instead.
std::vector<std::vector<int>> lar_active_sets(const MatrixXd& Psi, const VectorXd& t,
                                              int max_steps) {
  const Eigen::Index n = Psi.rows();
  const int p = static_cast<int>(Psi.cols());

  const double tbar = t.mean();
  const VectorXd tc = t.array() - tbar;

  MatrixXd Pn(n, p);
  std::vector<char> usable(p, 0);
  for (int j = 1; j < p; ++j) {
    VectorXd col = Psi.col(j).array() - Psi.col(j).mean();
    const double nrm = col.norm();
    if (nrm > 1e-12 * std::sqrt(static_cast<double>(n))) {
      usable[j] = 1;
      Pn.col(j) = col / nrm;
    }
  }

  std::vector<std::vector<int>> path;
  path.push_back({0});  // intercept-only model
  std::vector<int> active;
  std::vector<char> in_active(p, 0);
  VectorXd mu = VectorXd::Zero(n);
  const double c_floor = 1e-12 * std::max(1.0, tc.norm());

  for (int step = 1; step < max_steps; ++step) {
    const VectorXd c = Pn.transpose() * (tc - mu);
    int jbest = -1;
    double cmax = 0.0;
    for (int j = 1; j < p; ++j) {
      if (!usable[j] || in_active[j]) continue;
      if (std::abs(c(j)) > cmax) {
        cmax = std::abs(c(j));
        jbest = j;
      }
    }
    if (jbest < 0 || cmax < c_floor) break;
    active.push_back(jbest);
    in_active[jbest] = 1;

    const int k = static_cast<int>(active.size());
    MatrixXd Pa(n, k);
    VectorXd s(k);
    for (int a = 0; a < k; ++a) {
      Pa.col(a) = Pn.col(active[a]);
      s(a) = c(active[a]) >= 0.0 ? 1.0 : -1.0;
    }
    const MatrixXd G = Pa.transpose() * Pa;
    const Eigen::LDLT<MatrixXd> ldlt(G);
    const VectorXd w1 = ldlt.solve(s);
    const double sw = s.dot(w1);
    if (ldlt.info() != Eigen::Success || !(sw > 0.0) || !std::isfinite(sw)) {
      active.pop_back();
      break;
    }
    const double aa = 1.0 / std::sqrt(sw);
    const VectorXd u = Pa * (aa * w1);

    std::vector<int> with_intercept{0};
    with_intercept.insert(with_intercept.end(), active.begin(), active.end());
    path.push_back(std::move(with_intercept));

    const VectorXd a_corr = Pn.transpose() * u;
    double gamma = cmax / aa;
    for (int j = 1; j < p; ++j) {
      if (!usable[j] || in_active[j]) continue;
      const double d1 = (cmax - c(j)) / (aa - a_corr(j));
      const double d2 = (cmax + c(j)) / (aa + a_corr(j));
      if (d1 > 1e-14 && d1 < gamma) gamma = d1;
      if (d2 > 1e-14 && d2 < gamma) gamma = d2;
    }
    if (!std::isfinite(gamma) || gamma <= 0.0) break;
    mu += gamma * u;
  }
  return path;
}

bool ols_with_loo(const MatrixXd& Psi, const std::vector<int>& cols, const VectorXd& t,
                  VectorXd* coeffs, double* loo) {
  const Eigen::Index n = Psi.rows();
  const int k = static_cast<int>(cols.size());
  if (k >= n) return false;
  MatrixXd Pa(n, k);
  for (int a = 0; a < k; ++a) Pa.col(a) = Psi.col(cols[a]);

  Eigen::ColPivHouseholderQR<MatrixXd> qr(Pa);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) return false;
  const VectorXd beta = qr.solve(t);

  Eigen::HouseholderQR<MatrixXd> hqr(Pa);
  const MatrixXd Q = hqr.householderQ() * MatrixXd::Identity(n, k);
  const VectorXd resid = t - Pa * beta;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = Q.row(i).squaredNorm();
    if (h >= 1.0 - 1e-10) return false;  // interpolating row: LOO undefined
    const double e = resid(i) / (1.0 - h);
    acc += e * e;
  }
  if (coeffs) *coeffs = beta;
  if (loo) *loo = acc / static_cast<double>(n);
  return true;
}

PceModel fit_sparse(const InputModel& im, const MatrixXd& X, const VectorXd& t, int p_max) {
  const Eigen::Index n = X.rows();
  if (n != t.size() || n < 3) throw InvalidArgument("fit_sparse: need |X| = |t| >= 3");
  if (X.cols() != im.dim()) throw InvalidArgument("fit_sparse: design dimension mismatch");
  if (!t.allFinite()) throw InvalidArgument("fit_sparse: targets must be finite");
  if (p_max < 0) p_max = default_pmax(im.dim());

  PceModel best;
  best.input = im;
  best.loo_error = kInf;
  bool found = false;

  // Model selection uses the corrected leave-one-out estimate
  // loo * T(P, N), T = (1 + tr[(Psi_A' Psi_A)^-1]) * N / (N - P); the plain
  // hat-matrix LOO alone systematically over-selects at small N. The
  // reported loo_error stays uncorrected.
  double best_score = kInf;
  for (int p = 0; p <= p_max; ++p) {
    const MultiIndexSet A = total_degree_set(im.dim(), p);
    const MatrixXd Psi = basis_matrix(im, A, X);
    const int max_steps =
        static_cast<int>(std::min<Eigen::Index>(static_cast<Eigen::Index>(A.size()), n - 1));
    const auto path = lar_active_sets(Psi, t, std::max(1, max_steps));
    for (const auto& cols : path) {
      VectorXd coeffs;
      double loo;
      if (!ols_with_loo(Psi, cols, t, &coeffs, &loo)) continue;

      const int k = static_cast<int>(cols.size());
      MatrixXd G(k, k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          G(a, b) = Psi.col(cols[a]).dot(Psi.col(cols[b]));
      const double trace_inv = G.inverse().trace();
      const double correction =
          (1.0 + trace_inv) * static_cast<double>(n) / static_cast<double>(n - k);
      const double score = loo * (std::isfinite(correction) && correction > 0.0
                                      ? correction
                                      : static_cast<double>(n));

      if (found && score >= best_score - 1e-14 * std::max(1.0, best_score)) continue;
      best.set.dim = A.dim;
      best.set.indices.clear();
      for (const int j : cols) best.set.indices.push_back(A.indices[j]);
      best.coefficients = coeffs;
      best.loo_error = loo;
      best_score = score;
      found = true;
    }
  }

  if (!found) throw FitError("fit_sparse: every candidate set was rank deficient");
  return best;
}

}  // namespace gldemu
