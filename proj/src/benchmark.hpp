#pragma once

#include <string>
#include <utility>
#include <vector>

#include "testbed.hpp"

namespace gldemu {

enum class Method { infer_mm, infer_mle, joint_mm, joint_mle };

Method method_from_string(const std::string& s);
std::string to_string(Method m);

struct BenchmarkConfig {
  CaseId case_id = CaseId::example1;
  std::vector<Method> methods;
  std::vector<int> n_values;
  std::vector<int> r_values;
  std::vector<std::pair<int, int>> extra_nr;  // combos outside the N x R grid
  int repetitions = 1;
  int pmax = -1;                // < 0: dimension default
  int test_points = 1000;      // Sobol' test set size
  int kde_replications = 2000;  // reference budget for the SDE case
  std::uint64_t seed = 1;
};

struct BenchmarkRow {
  Method method;
  int n = 0;
  int r = 0;
  int repetition = 0;  // 1-based
  double epsilon = 0.0;
  double runtime_seconds = 0.0;
};

// Convergence-study protocol: independent designs per repetition (randomly
// shifted Sobol'), shared data across the four methods within a repetition,
// error per test point against the case reference. Every joint fit is
// verified against the support constraints; a violation aborts the run.
std::vector<BenchmarkRow> benchmark_run(const BenchmarkConfig& cfg);

// Rows sorted by (method, N, R, repetition), written as CSV.
void save_benchmark_csv(std::vector<BenchmarkRow> rows, const std::string& path);

// Eq.-style support check: every design point's replication range must lie
// inside the local support of the fitted surrogate.
bool satisfies_support_constraints(const LambdaSurrogate& s, const ReplicatedDesign& d);

}  // namespace gldemu
