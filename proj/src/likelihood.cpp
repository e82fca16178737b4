#include "likelihood.hpp"

#include <cmath>
#include <limits>

namespace gldemu {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEtaCap = 500.0;  // |log lambda2| beyond this is treated as infeasible
}  // namespace

JointObjective::JointObjective(const ReplicatedDesign& d,
                               const std::array<MultiIndexSet, 4>& sets)
    : y_(d.Y) {
  for (int s = 0; s < 4; ++s) {
    if (sets[s].dim != d.dim())
      throw InvalidArgument("JointObjective: truncation set dimension mismatch");
    psi_[s] = basis_matrix(d.input, sets[s], d.X);
    offsets_[s] = total_;
    total_ += static_cast<Eigen::Index>(sets[s].size());
    const_idx_[s] = -1;
    for (std::size_t k = 0; k < sets[s].indices.size(); ++k) {
      bool all_zero = true;
      for (const int deg : sets[s].indices[k]) all_zero = all_zero && deg == 0;
      if (all_zero) {
        const_idx_[s] = static_cast<int>(k);
        break;
      }
    }
  }
  ymin_ = y_.rowwise().minCoeff();
  ymax_ = y_.rowwise().maxCoeff();
  warm_u_ = MatrixXd::Constant(y_.rows(), y_.cols(), 0.5);
}

MatrixXd JointObjective::lambdas(const VectorXd& a) const {
  if (a.size() != total_) throw InvalidArgument("JointObjective: coefficient length mismatch");
  MatrixXd lam(y_.rows(), 4);
  for (int s = 0; s < 4; ++s) {
    const Eigen::Index p = psi_[s].cols();
    lam.col(s) = psi_[s] * a.segment(offsets_[s], p);
  }
  lam.col(1) = lam.col(1).array().exp();
  return lam;
}

double JointObjective::value(const VectorXd& a) { return value_grad(a, nullptr); }

double JointObjective::value_grad(const VectorXd& a, VectorXd* grad) {
  if (a.size() != total_) throw InvalidArgument("JointObjective: coefficient length mismatch");
  const Eigen::Index n = y_.rows();
  const Eigen::Index nr = y_.cols();

  std::array<VectorXd, 4> eta;
  for (int s = 0; s < 4; ++s)
    eta[s] = psi_[s] * a.segment(offsets_[s], psi_[s].cols());
  if (eta[1].lpNorm<Eigen::Infinity>() > kEtaCap) return kInf;

  double total = 0.0;
  if (grad) grad->setZero(total_);

  for (Eigen::Index i = 0; i < n; ++i) {
    const GldParams p(eta[0](i), std::exp(eta[1](i)), eta[2](i), eta[3](i));
    const SupportBounds b = support(p);
    if (ymin_(i) < b.lower || ymax_(i) > b.upper) return kInf;

    double dl[4] = {0.0, 0.0, 0.0, 0.0};
    for (Eigen::Index r = 0; r < nr; ++r) {
      const double w = warm_u_(i, r);
      const double u = bisect_u(p, y_(i, r), w - 0.05, w + 0.05, 1e-13);
      warm_u_(i, r) = u;
      if (u <= 0.0 || u >= 1.0) return kInf;
      const ObsGrad og = obs_grad(p, u);
      total += og.nll;
      if (grad)
        for (int s = 0; s < 4; ++s) dl[s] += og.dl_dlam[s];
    }
    if (!std::isfinite(total)) return kInf;
    if (grad) {
      grad->segment(offsets_[0], psi_[0].cols()) += dl[0] * psi_[0].row(i).transpose();
      // chain through the log link: d lambda2 / d a = lambda2 * psi
      grad->segment(offsets_[1], psi_[1].cols()) += dl[1] * p.lambda2 * psi_[1].row(i).transpose();
      grad->segment(offsets_[2], psi_[2].cols()) += dl[2] * psi_[2].row(i).transpose();
      grad->segment(offsets_[3], psi_[3].cols()) += dl[3] * psi_[3].row(i).transpose();
    }
  }
  return total;
}

}  // namespace gldemu
