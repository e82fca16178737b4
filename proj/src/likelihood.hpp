#pragma once

#include <array>

#include "dataset.hpp"
#include "gld.hpp"
#include "surrogate.hpp"

namespace gldemu {

// Pooled negative log-likelihood of all N*R observations under coefficient
// vector a. Basis matrices are evaluated once at construction; the per
// observation root solves are warm-started from the previous evaluation.
class JointObjective {
public:
  JointObjective(const ReplicatedDesign& d, const std::array<MultiIndexSet, 4>& sets);

  Eigen::Index size() const { return total_; }

  // +inf when any observation falls outside the candidate support.
  double value(const VectorXd& a);

  // Fills grad when the value is finite; grad must have size() entries.
  double value_grad(const VectorXd& a, VectorXd* grad);

  // N x 4 matrix of distribution parameters at the design points.
  MatrixXd lambdas(const VectorXd& a) const;

  // Column index of the constant multi-index in set s, or -1 when absent.
  int constant_index(int s) const { return const_idx_[s]; }
  Eigen::Index offset(int s) const { return offsets_[s]; }

  const VectorXd& y_min() const { return ymin_; }
  const VectorXd& y_max() const { return ymax_; }

private:
  std::array<MatrixXd, 4> psi_;
  std::array<Eigen::Index, 4> offsets_{};
  std::array<int, 4> const_idx_{};
  Eigen::Index total_ = 0;
  MatrixXd y_;
  VectorXd ymin_, ymax_;
  MatrixXd warm_u_;
};

}  // namespace gldemu
