#include "joint_fit.hpp"

#include <cmath>
#include <limits>

#include "likelihood.hpp"
#include "optim.hpp"
#include "rng.hpp"

namespace gldemu {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::array<MultiIndexSet, 4> sets_of(const LambdaSurrogate& s) {
  return {s.pc[0].set, s.pc[1].set, s.pc[2].set, s.pc[3].set};
}

VectorXd repair_with(JointObjective& obj, const VectorXd& a_tilde, const VectorXd& ymin,
                     const VectorXd& ymax) {
  const MatrixXd lam = obj.lambdas(a_tilde);
  const Eigen::Index n = lam.rows();

  double shift3 = 0.0, shift4 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l1 = lam(i, 0), l2 = lam(i, 1), l3 = lam(i, 2), l4 = lam(i, 3);
    if (l3 > 0.0 && l1 > ymin(i)) {
      const double cap = 1.0 / (l2 * (l1 - ymin(i)));
      shift3 = std::max(shift3, l3 - 0.95 * cap);
    }
    if (l4 > 0.0 && ymax(i) > l1) {
      const double cap = 1.0 / (l2 * (ymax(i) - l1));
      shift4 = std::max(shift4, l4 - 0.95 * cap);
    }
  }
  if (!std::isfinite(shift3) || !std::isfinite(shift4))
    throw FitError("feasible_start: support repair is not possible for these coefficients");

  VectorXd a = a_tilde;
  if (shift3 > 0.0) {
    if (obj.constant_index(2) < 0)
      throw FitError("feasible_start: lambda3 expansion has no constant term to adjust");
    a(obj.offset(2) + obj.constant_index(2)) -= shift3;
  }
  if (shift4 > 0.0) {
    if (obj.constant_index(3) < 0)
      throw FitError("feasible_start: lambda4 expansion has no constant term to adjust");
    a(obj.offset(3) + obj.constant_index(3)) -= shift4;
  }
  return a;
}

}  // namespace

double joint_nll(const VectorXd& a, const ReplicatedDesign& d,
                 const std::array<MultiIndexSet, 4>& sets) {
  JointObjective obj(d, sets);
  return obj.value(a);
}

VectorXd joint_nll_grad(const VectorXd& a, const ReplicatedDesign& d,
                        const std::array<MultiIndexSet, 4>& sets) {
  JointObjective obj(d, sets);
  VectorXd g(obj.size());
  const double f = obj.value_grad(a, &g);
  if (!std::isfinite(f))
    throw DomainError("joint_nll_grad: gradient undefined, NLL is not finite at a");
  return g;
}

VectorXd feasible_start(const VectorXd& a_tilde, const ReplicatedDesign& d,
                        const std::array<MultiIndexSet, 4>& sets) {
  JointObjective obj(d, sets);
  return repair_with(obj, a_tilde, obj.y_min(), obj.y_max());
}

std::pair<LambdaSurrogate, JointFitReport> fit_joint(const ReplicatedDesign& d,
                                                     const LambdaSurrogate& init,
                                                     const JointFitOptions& opts) {
  const auto sets = sets_of(init);
  JointObjective obj(d, sets);
  const VectorXd a_tilde = flatten(init);

  JointFitReport report;
  Rng rng(opts.seed != 0 ? opts.seed : splitmix64(d.seed ^ 0x6a09e667f3bcc909ull));

  VectorXd a0;
  try {
    a0 = repair_with(obj, a_tilde, obj.y_min(), obj.y_max());
  } catch (const FitError&) {
    a0 = a_tilde;
  }
  report.constraint_repair_applied = (a0 - a_tilde).norm() > 0.0;
  double f0 = obj.value(a0);

  // Fallback for a start the deterministic repair could not fix: search for
  // any feasible perturbation and hand it to the constrained strategy.
  if (!std::isfinite(f0)) {
    double scale = 1e-3 * std::max(1.0, a_tilde.norm());
    for (int attempt = 0; attempt < 200 && !std::isfinite(f0); ++attempt) {
      VectorXd cand = a_tilde;
      for (Eigen::Index k = 0; k < cand.size(); ++k) cand(k) += scale * rng.normal();
      try {
        cand = repair_with(obj, cand, obj.y_min(), obj.y_max());
      } catch (const FitError&) {
      }
      const double fc = obj.value(cand);
      if (std::isfinite(fc)) {
        a0 = cand;
        f0 = fc;
        report.constraint_repair_applied = true;
      }
      scale *= 1.1;
    }
    if (!std::isfinite(f0))
      throw FitError("fit_joint: no feasible starting coefficients could be constructed");
  }

  const auto value_grad = [&obj](const VectorXd& x, VectorXd* g) {
    return g ? obj.value_grad(x, g) : obj.value(x);
  };

  // Trust region first; when it stalls on an activated support constraint,
  // hand over to the constrained evolutionary search, then let the trust
  // region exploit again from wherever the search escaped to. The rounds
  // share the evolutionary evaluation budget.
  TrustRegionOptions tr_opts;
  tr_opts.max_iterations = opts.tr_max_iterations;

  VectorXd a_best = a0;
  double f_best = f0;
  report.optimizer = "trust-region";
  int es_budget_left = opts.es_budget;

  for (int round = 0; round < 4; ++round) {
    const TrustRegionResult tr = trust_region_minimize(value_grad, a_best, tr_opts);
    report.iterations += tr.iterations;
    if (tr.value < f_best) {
      a_best = tr.x;
      f_best = tr.value;
    }
    const bool stalled = !tr.converged && (tr.saw_infinite_trial || tr.grad_norm > 1e-3);
    if (!stalled || es_budget_left <= 0) break;

    const double sigma0 = std::max(1e-3, 0.02 * std::max(1.0, a_best.norm()));
    const auto es = one_plus_one_es([&obj](const VectorXd& x) { return obj.value(x); }, a_best,
                                    f_best, sigma0, es_budget_left, rng);
    es_budget_left -= es.evaluations;
    report.iterations += es.evaluations;
    report.optimizer = "constrained-evolutionary";
    const double gain = f_best - es.value;
    a_best = es.x;
    f_best = es.value;
    if (gain <= 1e-8 * std::max(1.0, std::abs(f_best))) break;
  }

  // Monotone-improvement contract with respect to the repaired start.
  if (!(f_best <= f0)) {
    a_best = a0;
    f_best = f0;
  }

  VectorXd g(obj.size());
  const double f_final = obj.value_grad(a_best, &g);
  report.final_nll = f_final;
  report.grad_norm = g.lpNorm<Eigen::Infinity>();

  return {with_coefficients(init, a_best), report};
}

}  // namespace gldemu
