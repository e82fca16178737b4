#include "benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <tuple>

#include "infer_fit.hpp"
#include "joint_fit.hpp"
#include "sobol.hpp"

namespace gldemu {

Method method_from_string(const std::string& s) {
  if (s == "infer-mm") return Method::infer_mm;
  if (s == "infer-mle") return Method::infer_mle;
  if (s == "joint-mm") return Method::joint_mm;
  if (s == "joint-mle") return Method::joint_mle;
  throw InvalidArgument("unknown method '" + s +
                        "' (expected infer-mm, infer-mle, joint-mm or joint-mle)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::infer_mm: return "infer-mm";
    case Method::infer_mle: return "infer-mle";
    case Method::joint_mm: return "joint-mm";
    case Method::joint_mle: return "joint-mle";
  }
  return "?";
}

bool satisfies_support_constraints(const LambdaSurrogate& s, const ReplicatedDesign& d) {
  for (int i = 0; i < d.n_points(); ++i) {
    const VectorXd x = d.X.row(i).transpose();
    const SupportBounds b = support(s.params_at(x));
    if (d.Y.row(i).minCoeff() < b.lower || d.Y.row(i).maxCoeff() > b.upper) return false;
  }
  return true;
}

namespace {

MatrixXd case_bounds(const InputModel& im) {
  MatrixXd b(im.dim(), 2);
  for (int j = 0; j < im.dim(); ++j) {
    b(j, 0) = im.marginals[j].lower;
    b(j, 1) = im.marginals[j].upper;
  }
  return b;
}

// Cranley-Patterson rotation: keeps the low-discrepancy structure while
// giving independent designs across repetitions.
MatrixXd shifted_sobol(int m, int n, const MatrixXd& bounds, Rng& rng) {
  MatrixXd unit = sobol_points(m, n);
  for (int j = 0; j < m; ++j) {
    const double shift = rng.uniform();
    for (int i = 0; i < n; ++i) {
      double v = unit(i, j) + shift;
      if (v >= 1.0) v -= 1.0;
      unit(i, j) = v;
    }
  }
  MatrixXd pts(n, m);
  for (int j = 0; j < m; ++j)
    pts.col(j) = bounds(j, 0) + (bounds(j, 1) - bounds(j, 0)) * unit.col(j).array();
  return pts;
}

}  // namespace

std::vector<BenchmarkRow> benchmark_run(const BenchmarkConfig& cfg) {
  if (cfg.methods.empty()) throw InvalidArgument("benchmark: no methods selected");
  if (cfg.repetitions < 1) throw InvalidArgument("benchmark: repetitions must be >= 1");
  const CaseInfo info = case_info(cfg.case_id);
  const MatrixXd bounds = case_bounds(info.input);

  const int n_test = cfg.test_points > 0 ? cfg.test_points : 1000;
  const MatrixXd test_x = design(DesignKind::sobol, info.dim, n_test, bounds, 0);

  // Reference densities are shared by all methods and repetitions.
  std::vector<DensityHandle> reference(n_test);
  for (int t = 0; t < n_test; ++t) {
    const VectorXd x = test_x.row(t).transpose();
    if (info.analytic_pdf) {
      reference[t] = true_pdf(cfg.case_id, x);
    } else {
      const int budget = cfg.kde_replications > 0 ? cfg.kde_replications : 2000;
      std::vector<double> ys(budget);
      for (int k = 0; k < budget; ++k) {
        Rng rng(substream_seed(splitmix64(cfg.seed ^ 0x7265666572656e63ull),
                               static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(k)));
        ys[k] = simulate(cfg.case_id, x, rng);
      }
      const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
      std::vector<double> grid{*lo, *hi};
      reference[t] = kde_reference(ys, grid);
    }
  }

  const auto ref_at = [&](int t) { return reference[t]; };

  const bool want_infer_mm = std::count(cfg.methods.begin(), cfg.methods.end(), Method::infer_mm) ||
                             std::count(cfg.methods.begin(), cfg.methods.end(), Method::joint_mm);
  const bool want_infer_mle =
      std::count(cfg.methods.begin(), cfg.methods.end(), Method::infer_mle) ||
      std::count(cfg.methods.begin(), cfg.methods.end(), Method::joint_mle);

  std::vector<std::pair<int, int>> combos;
  for (const int n : cfg.n_values)
    for (const int r : cfg.r_values) combos.emplace_back(n, r);
  for (const auto& nr : cfg.extra_nr)
    if (std::find(combos.begin(), combos.end(), nr) == combos.end()) combos.push_back(nr);
  if (combos.empty()) throw InvalidArgument("benchmark: no (N, R) combinations");

  std::vector<BenchmarkRow> rows;
  const auto epsilon_of = [&](const LambdaSurrogate& s) {
    double sum = 0.0;
    for (int t = 0; t < n_test; ++t)
      sum += hellinger(gld_density(s.params_at(test_x.row(t).transpose())), ref_at(t));
    return sum / n_test;
  };

  using clock = std::chrono::steady_clock;
  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    const auto [n, r] = combos[ci];
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      const std::uint64_t rep_seed =
          splitmix64(cfg.seed ^ splitmix64((ci + 1) * 1000003ull + rep));
      Rng shift_rng(rep_seed);
      const MatrixXd X = shifted_sobol(info.dim, n, bounds, shift_rng);
      const ReplicatedDesign data = run_replicated(cfg.case_id, X, r, splitmix64(rep_seed));

      struct Fitted {
        LambdaSurrogate s;
        double seconds;
      };
      std::optional<Fitted> inf_mm, inf_mle;
      if (want_infer_mm) {
        const auto t0 = clock::now();
        LambdaSurrogate s = infer_and_fit(data, LocalMethod::mm, cfg.pmax);
        inf_mm = {std::move(s), std::chrono::duration<double>(clock::now() - t0).count()};
      }
      if (want_infer_mle) {
        const auto t0 = clock::now();
        LambdaSurrogate s = infer_and_fit(data, LocalMethod::mle, cfg.pmax);
        inf_mle = {std::move(s), std::chrono::duration<double>(clock::now() - t0).count()};
      }

      for (const Method m : cfg.methods) {
        BenchmarkRow row;
        row.method = m;
        row.n = n;
        row.r = r;
        row.repetition = rep + 1;
        switch (m) {
          case Method::infer_mm:
            row.runtime_seconds = inf_mm->seconds;
            row.epsilon = epsilon_of(inf_mm->s);
            break;
          case Method::infer_mle:
            row.runtime_seconds = inf_mle->seconds;
            row.epsilon = epsilon_of(inf_mle->s);
            break;
          case Method::joint_mm:
          case Method::joint_mle: {
            const Fitted& warm = m == Method::joint_mm ? *inf_mm : *inf_mle;
            JointFitOptions jopts;
            jopts.seed = splitmix64(rep_seed ^ (m == Method::joint_mm ? 0x6d6dull : 0x6d6c65ull));
            const auto t0 = clock::now();
            auto [s, report] = fit_joint(data, warm.s, jopts);
            const double secs = std::chrono::duration<double>(clock::now() - t0).count();
            if (!satisfies_support_constraints(s, data))
              throw FitError("benchmark: joint fit violates the support constraints");
            row.runtime_seconds = warm.seconds + secs;
            row.epsilon = epsilon_of(s);
            break;
          }
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void save_benchmark_csv(std::vector<BenchmarkRow> rows, const std::string& path) {
  std::sort(rows.begin(), rows.end(), [](const BenchmarkRow& a, const BenchmarkRow& b) {
    const auto key = [](const BenchmarkRow& x) {
      return std::make_tuple(to_string(x.method), x.n, x.r, x.repetition);
    };
    return key(a) < key(b);
  });
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "N,R,method,repetition,epsilon,runtime_seconds\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", row.epsilon);
    out << row.n << "," << row.r << "," << to_string(row.method) << "," << row.repetition << ","
        << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", row.runtime_seconds);
    out << buf << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace gldemu
