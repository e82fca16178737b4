#pragma once

#include <Eigen/Dense>
#include <vector>

#include "errors.hpp"

namespace gldemu {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class MarginalKind { uniform, gaussian };

struct Marginal {
  MarginalKind kind = MarginalKind::uniform;
  double lower = -1.0;  // uniform only
  double upper = 1.0;

  static Marginal Uniform(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw InvalidArgument("Marginal: uniform bounds must be finite with lower < upper");
    return Marginal{MarginalKind::uniform, lo, hi};
  }
  static Marginal Gaussian() { return Marginal{MarginalKind::gaussian, 0.0, 0.0}; }
};

// Independent input marginals; uniforms are mapped affinely onto [-1,1]
// (Legendre), gaussians are standard normal (Hermite).
struct InputModel {
  InputModel() = default;
  explicit InputModel(std::vector<Marginal> ms);

  int dim() const { return static_cast<int>(marginals.size()); }

  // standardized coordinate for dimension j; throws DomainError when x lies
  // outside the marginal support
  double to_standard(int j, double x) const;

  std::vector<Marginal> marginals;
};

using MultiIndex = std::vector<int>;

// Duplicate-free, graded-lexicographically ordered multi-index set.
struct MultiIndexSet {
  int dim = 0;
  std::vector<MultiIndex> indices;

  std::size_t size() const { return indices.size(); }
};

// All alpha with |alpha|_1 <= p; size C(M+p, p).
MultiIndexSet total_degree_set(int m, int p);

// Constant-only set {0,...,0}.
MultiIndexSet constant_set(int m);

// Orthonormal univariate values phi_0..phi_n at standardized z.
void legendre_orthonormal(double z, int n, double* out);
void hermite_orthonormal(double z, int n, double* out);

// Tensorized orthonormal basis values psi_alpha(x) for all alpha in A.
VectorXd eval_basis(const InputModel& im, const MultiIndexSet& A, const VectorXd& x);

// N x |A| matrix of basis values at the rows of X.
MatrixXd basis_matrix(const InputModel& im, const MultiIndexSet& A, const MatrixXd& X);

struct PceModel {
  InputModel input;
  MultiIndexSet set;
  VectorXd coefficients;
  double loo_error = 0.0;

  double eval(const VectorXd& x) const;
};

// Least-angle-regression forward path on centred/normalized columns; column 0
// must be the constant, which is part of every returned active set. The sets
// are nested and strictly growing.
std::vector<std::vector<int>> lar_active_sets(const MatrixXd& Psi, const VectorXd& t,
                                              int max_steps);

// OLS refit of the chosen columns with the hat-matrix leave-one-out error.
// Returns false for rank-deficient or interpolating sets.
bool ols_with_loo(const MatrixXd& Psi, const std::vector<int>& cols, const VectorXd& t,
                  VectorXd* coeffs, double* loo);

// Sparse expansion fitting: runs the LAR path on the orthonormal design
// matrix for every candidate degree p = 0..p_max, refits each visited active
// set by ordinary least squares, scores it by the size-corrected hat-matrix
// leave-one-out error, and returns the minimizer over the whole
// (p, active set) grid. loo_error records the uncorrected estimate.
PceModel fit_sparse(const InputModel& im, const MatrixXd& X, const VectorXd& t, int p_max);

inline int default_pmax(int m) { return m == 1 ? 10 : 5; }

}  // namespace gldemu
