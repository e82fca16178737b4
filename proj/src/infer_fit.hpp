#pragma once

#include "dataset.hpp"
#include "surrogate.hpp"

namespace gldemu {

enum class LocalMethod { mm, mle };

LocalMethod local_method_from_string(const std::string& s);

// Local GLD inference per design point: row i holds the four parameters
// fitted to the replications of point i (MLE fits are initialized from the
// moment fit). Requires R >= 4.
MatrixXd local_params(const ReplicatedDesign& d, LocalMethod method);

// Regression stage: four independent sparse expansions over the columns
// (lambda1, log lambda2, lambda3, lambda4).
LambdaSurrogate fit_surrogate_from_lambdas(const InputModel& im, const MatrixXd& X,
                                           const MatrixXd& lambdas, int p_max);

// Infer-and-Fit: local inference followed by the four regressions.
// p_max < 0 selects the degree cap from the input dimension.
LambdaSurrogate infer_and_fit(const ReplicatedDesign& d, LocalMethod method, int p_max = -1);

}  // namespace gldemu
