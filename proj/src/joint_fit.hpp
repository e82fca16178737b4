#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>

#include "dataset.hpp"
#include "surrogate.hpp"

namespace gldemu {

// Pooled negative log-likelihood over all N*R observations; +inf is a value
// (candidate support excludes some observation), not an error.
double joint_nll(const VectorXd& a, const ReplicatedDesign& d,
                 const std::array<MultiIndexSet, 4>& sets);

// Analytic gradient via implicit differentiation of the root solves; throws
// DomainError when the NLL is not finite at a.
VectorXd joint_nll_grad(const VectorXd& a, const ReplicatedDesign& d,
                        const std::array<MultiIndexSet, 4>& sets);

// Shrinks the constant coefficients of the two shape expansions until every
// observation lies inside its local support (5% slack off the critical
// shape). Already-feasible coefficients are returned unchanged. Throws
// FitError when a needed constant term is absent from the truncation set.
VectorXd feasible_start(const VectorXd& a_tilde, const ReplicatedDesign& d,
                        const std::array<MultiIndexSet, 4>& sets);

struct JointFitReport {
  double final_nll = 0.0;
  int iterations = 0;                // optimizer iterations/evaluations spent
  std::string optimizer;             // "trust-region" or "constrained-evolutionary"
  bool constraint_repair_applied = false;
  double grad_norm = 0.0;            // ||g||_inf at exit
};

struct JointFitOptions {
  int tr_max_iterations = 500;
  int es_budget = 20000;
  std::uint64_t seed = 0;  // 0: derive from the design's provenance seed
};

// Refines all coefficients at once: repairs the start, runs the trust-region
// minimizer with analytic gradients, and falls back to a constrained (1+1)
// evolution strategy when the trust region stalls on the support constraints.
// The result never has a worse NLL than the repaired start.
std::pair<LambdaSurrogate, JointFitReport> fit_joint(const ReplicatedDesign& d,
                                                     const LambdaSurrogate& init,
                                                     const JointFitOptions& opts = {});

}  // namespace gldemu
