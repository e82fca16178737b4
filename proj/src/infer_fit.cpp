#include "infer_fit.hpp"

#include <cmath>

#include "gld_fit.hpp"

namespace gldemu {

LocalMethod local_method_from_string(const std::string& s) {
  if (s == "mm") return LocalMethod::mm;
  if (s == "mle") return LocalMethod::mle;
  throw InvalidArgument("unknown local method '" + s + "' (expected mm or mle)");
}

MatrixXd local_params(const ReplicatedDesign& d, LocalMethod method) {
  if (d.replications() < 4)
    throw InvalidArgument("local_params: at least 4 replications required, got " +
                          std::to_string(d.replications()));
  MatrixXd lam(d.n_points(), 4);
  for (int i = 0; i < d.n_points(); ++i) {
    std::vector<double> ys(d.replications());
    for (int r = 0; r < d.replications(); ++r) ys[r] = d.Y(i, r);
    try {
      GldParams p = fit_mm(ys);
      if (method == LocalMethod::mle) p = fit_mle(ys, p);
      lam(i, 0) = p.lambda1;
      lam(i, 1) = p.lambda2;
      lam(i, 2) = p.lambda3;
      lam(i, 3) = p.lambda4;
    } catch (const Error& e) {
      throw FitError("local fit failed at design point " + std::to_string(i + 1) + ": " +
                     e.what());
    }
  }
  return lam;
}

LambdaSurrogate fit_surrogate_from_lambdas(const InputModel& im, const MatrixXd& X,
                                           const MatrixXd& lambdas, int p_max) {
  if (lambdas.rows() != X.rows() || lambdas.cols() != 4)
    throw InvalidArgument("fit_surrogate_from_lambdas: lambda matrix must be N x 4");
  if ((lambdas.col(1).array() <= 0.0).any())
    throw InvalidArgument("fit_surrogate_from_lambdas: lambda2 column must be positive");
  LambdaSurrogate s;
  s.input = im;
  for (int k = 0; k < 4; ++k) {
    VectorXd target = lambdas.col(k);
    if (k == 1) target = target.array().log();
    s.pc[k] = fit_sparse(im, X, target, p_max);
  }
  return s;
}

LambdaSurrogate infer_and_fit(const ReplicatedDesign& d, LocalMethod method, int p_max) {
  const MatrixXd lam = local_params(d, method);
  return fit_surrogate_from_lambdas(d.input, d.X, lam, p_max);
}

}  // namespace gldemu
