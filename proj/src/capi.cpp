#include "gldemu/gldemu.h"

#include <cmath>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "benchmark.hpp"
#include "dataset.hpp"
#include "infer_fit.hpp"
#include "joint_fit.hpp"
#include "surrogate.hpp"
#include "testbed.hpp"

using namespace gldemu;

struct gldemu_dataset {
  ReplicatedDesign rep;
};

struct gldemu_model {
  ModelFile file;
};

namespace {

thread_local std::string g_last_error = "no error";

int set_error(gldemu_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

gldemu_status status_of(const Error& e) {
  switch (e.code()) {
    case errc::invalid_argument: return GLDEMU_E_USAGE;
    case errc::data: return GLDEMU_E_DATA;
    case errc::fit_failure: return GLDEMU_E_FIT;
    case errc::domain: return GLDEMU_E_DOMAIN;
    case errc::io: return GLDEMU_E_IO;
    case errc::metric: return GLDEMU_E_INTERNAL;
  }
  return GLDEMU_E_INTERNAL;
}

template <typename F>
int guarded(F&& fn) {
  try {
    fn();
    return GLDEMU_OK;
  } catch (const Error& e) {
    return set_error(status_of(e), e.what());
  } catch (const std::exception& e) {
    return set_error(GLDEMU_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(GLDEMU_E_INTERNAL, "unknown error");
  }
}

int require(bool cond, const char* msg) {
  if (cond) return GLDEMU_OK;
  return set_error(GLDEMU_E_USAGE, msg);
}

// Joint variants embed the Infer-and-Fit warm start.
ModelFile fit_model(const ReplicatedDesign& d, const std::string& method, int pmax,
                    std::uint64_t seed) {
  const Method m = method_from_string(method);
  const LocalMethod local =
      (m == Method::infer_mm || m == Method::joint_mm) ? LocalMethod::mm : LocalMethod::mle;
  ModelFile out;
  out.method = method;
  LambdaSurrogate warm = infer_and_fit(d, local, pmax);
  if (m == Method::infer_mm || m == Method::infer_mle) {
    out.surrogate = std::move(warm);
    return out;
  }
  JointFitOptions opts;
  opts.seed = seed != 0 ? seed : splitmix64(d.seed ^ 0x4a4f494e54ull);
  auto [refined, report] = fit_joint(d, warm, opts);
  out.surrogate = std::move(refined);
  nlohmann::json j{{"final_nll", report.final_nll},
                   {"iterations", report.iterations},
                   {"optimizer", report.optimizer},
                   {"constraint_repair_applied", report.constraint_repair_applied},
                   {"grad_norm", report.grad_norm}};
  out.fit_report_json = j.dump();
  return out;
}

VectorXd to_vector(const double* x, int n) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = x[i];
  return v;
}

}  // namespace

extern "C" {

const char* gldemu_last_error(void) { return g_last_error.c_str(); }

const char* gldemu_version(void) { return "0.1.0"; }

int gldemu_simulate(const char* case_name, int n_points, int n_replications, uint64_t seed,
                    gldemu_dataset** out) {
  if (int rc = require(case_name && out, "gldemu_simulate: NULL argument")) return rc;
  return guarded([&] {
    if (n_points < 1) throw InvalidArgument("simulate: N must be >= 1");
    if (n_replications < 1) throw InvalidArgument("simulate: R must be >= 1");
    const CaseId c = case_from_string(case_name);
    const CaseInfo info = case_info(c);
    MatrixXd bounds(info.dim, 2);
    for (int j = 0; j < info.dim; ++j) {
      bounds(j, 0) = info.input.marginals[j].lower;
      bounds(j, 1) = info.input.marginals[j].upper;
    }
    const MatrixXd X = design(DesignKind::sobol, info.dim, n_points, bounds, seed);
    *out = new gldemu_dataset{run_replicated(c, X, n_replications, seed)};
  });
}

int gldemu_dataset_load(const char* csv_path, const char* case_name, gldemu_dataset** out) {
  if (int rc = require(csv_path && out, "gldemu_dataset_load: NULL argument")) return rc;
  return guarded([&] {
    std::optional<InputModel> im;
    if (case_name) im = case_info(case_from_string(case_name)).input;
    *out = new gldemu_dataset{load_csv(csv_path, im)};
  });
}

int gldemu_dataset_save(const gldemu_dataset* d, const char* csv_path) {
  if (int rc = require(d && csv_path, "gldemu_dataset_save: NULL argument")) return rc;
  return guarded([&] { save_csv(d->rep, csv_path); });
}

int gldemu_dataset_shape(const gldemu_dataset* d, int* n_points, int* input_dim,
                         int* n_replications) {
  if (int rc = require(d != nullptr, "gldemu_dataset_shape: NULL dataset")) return rc;
  if (n_points) *n_points = d->rep.n_points();
  if (input_dim) *input_dim = d->rep.dim();
  if (n_replications) *n_replications = d->rep.replications();
  return GLDEMU_OK;
}

void gldemu_dataset_free(gldemu_dataset* d) { delete d; }

int gldemu_fit(const gldemu_dataset* d, const char* method, int pmax, uint64_t seed,
               gldemu_model** out) {
  if (int rc = require(d && method && out, "gldemu_fit: NULL argument")) return rc;
  return guarded([&] { *out = new gldemu_model{fit_model(d->rep, method, pmax, seed)}; });
}

int gldemu_model_save(const gldemu_model* m, const char* json_path) {
  if (int rc = require(m && json_path, "gldemu_model_save: NULL argument")) return rc;
  return guarded([&] { save_model(m->file, json_path); });
}

int gldemu_model_load(const char* json_path, gldemu_model** out) {
  if (int rc = require(json_path && out, "gldemu_model_load: NULL argument")) return rc;
  return guarded([&] { *out = new gldemu_model{load_model(json_path)}; });
}

int gldemu_model_input_dim(const gldemu_model* m, int* input_dim) {
  if (int rc = require(m && input_dim, "gldemu_model_input_dim: NULL argument")) return rc;
  *input_dim = m->file.surrogate.input.dim();
  return GLDEMU_OK;
}

int gldemu_model_lambda(const gldemu_model* m, const double* x, int input_dim,
                        double lambda_out[4]) {
  if (int rc = require(m && x && lambda_out, "gldemu_model_lambda: NULL argument")) return rc;
  return guarded([&] {
    const auto l = m->file.surrogate.lambda(to_vector(x, input_dim));
    for (int i = 0; i < 4; ++i) lambda_out[i] = l[i];
  });
}

int gldemu_model_support(const gldemu_model* m, const double* x, int input_dim, double* lower,
                         double* upper) {
  if (int rc = require(m && x && lower && upper, "gldemu_model_support: NULL argument")) return rc;
  return guarded([&] {
    const SupportBounds b = support(m->file.surrogate.params_at(to_vector(x, input_dim)));
    *lower = b.lower;
    *upper = b.upper;
  });
}

int gldemu_model_quantile(const gldemu_model* m, const double* x, int input_dim, double u,
                          double* out) {
  if (int rc = require(m && x && out, "gldemu_model_quantile: NULL argument")) return rc;
  return guarded([&] {
    *out = quantile(m->file.surrogate.params_at(to_vector(x, input_dim)), u);
  });
}

int gldemu_model_pdf(const gldemu_model* m, const double* x, int input_dim, double y,
                     double* out) {
  if (int rc = require(m && x && out, "gldemu_model_pdf: NULL argument")) return rc;
  return guarded([&] { *out = pdf(m->file.surrogate.params_at(to_vector(x, input_dim)), y); });
}

void gldemu_model_free(gldemu_model* m) { delete m; }

int gldemu_benchmark(const gldemu_benchmark_config* cfg, const char* out_csv_path) {
  if (int rc = require(cfg && out_csv_path && cfg->case_name && cfg->methods,
                       "gldemu_benchmark: NULL argument"))
    return rc;
  return guarded([&] {
    BenchmarkConfig c;
    c.case_id = case_from_string(cfg->case_name);
    std::stringstream ss(cfg->methods);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) c.methods.push_back(method_from_string(tok));
    }
    if (!cfg->n_values || cfg->n_count < 1 || !cfg->r_values || cfg->r_count < 1)
      throw InvalidArgument("benchmark: at least one N and one R value required");
    c.n_values.assign(cfg->n_values, cfg->n_values + cfg->n_count);
    c.r_values.assign(cfg->r_values, cfg->r_values + cfg->r_count);
    c.repetitions = cfg->repetitions;
    c.pmax = cfg->pmax;
    c.test_points = cfg->test_points;
    c.kde_replications = cfg->kde_replications;
    c.seed = cfg->seed;
    save_benchmark_csv(benchmark_run(c), out_csv_path);
  });
}

}  // extern "C"
