// Command-line front end for the gldemu shared library. Talks to the core
// exclusively through the C API.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gldemu/gldemu.h"

namespace {

// Exit codes: 0 success, 2 usage, 3 data error, 4 fit failure.
int exit_code_of(int status) {
  switch (status) {
    case GLDEMU_OK: return 0;
    case GLDEMU_E_USAGE: return 2;
    case GLDEMU_E_DATA: return 3;
    case GLDEMU_E_DOMAIN: return 3;
    case GLDEMU_E_IO: return 3;
    case GLDEMU_E_FIT: return 4;
    default: return 1;
  }
}

[[noreturn]] void fail(int status) {
  std::cerr << "error: " << gldemu_last_error() << "\n";
  std::exit(exit_code_of(status));
}

void check(int status) {
  if (status != GLDEMU_OK) fail(status);
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(tok, &pos);
      if (pos != tok.size() || v < 1) throw std::invalid_argument("");
      out.push_back(v);
    } catch (const std::exception&) {
      std::cerr << "error: invalid " << what << " list entry '" << tok << "'\n";
      std::exit(2);
    }
  }
  if (out.empty()) {
    std::cerr << "error: empty " << what << " list\n";
    std::exit(2);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument("");
      out.push_back(v);
    } catch (const std::exception&) {
      std::cerr << "error: invalid " << what << " list entry '" << tok << "'\n";
      std::exit(2);
    }
  }
  return out;
}

// Points file: CSV with header x1,...,xM.
std::vector<std::vector<double>> load_points(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open points file " << path << "\n";
    std::exit(3);
  }
  std::string line;
  if (!std::getline(in, line)) {
    std::cerr << "error: empty points file " << path << "\n";
    std::exit(3);
  }
  std::vector<std::vector<double>> pts;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto vals = parse_double_list(line, "point coordinate");
    if (static_cast<int>(vals.size()) != dim) {
      std::cerr << "error: line " << line_no << ": expected " << dim << " coordinates\n";
      std::exit(3);
    }
    pts.push_back(vals);
  }
  return pts;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic simulator emulation with generalized lambda distributions"};
  app.require_subcommand(1);

  // --- simulate ---
  auto* sim = app.add_subcommand("simulate", "Generate a replicated dataset from a built-in case");
  std::string sim_case, sim_out;
  int sim_n = 0, sim_r = 0;
  std::uint64_t sim_seed = 1;
  sim->add_option("--case", sim_case, "Case name: example1, example2, sde")->required();
  sim->add_option("-N", sim_n, "Number of design points")->required();
  sim->add_option("-R", sim_r, "Replications per design point")->required();
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "Output CSV path")->required();

  // --- fit ---
  auto* fit = app.add_subcommand("fit", "Fit a surrogate model");
  std::string fit_case, fit_data, fit_method, fit_out;
  int fit_n = 0, fit_r = 0, fit_pmax = -1;
  std::uint64_t fit_seed = 1;
  fit->add_option("--case", fit_case, "Case name (input marginals / data generation)");
  fit->add_option("--data", fit_data, "Dataset CSV (from simulate or external)");
  fit->add_option("--method", fit_method, "infer-mm | infer-mle | joint-mm | joint-mle")
      ->required();
  fit->add_option("-N", fit_n, "Design size when generating from --case");
  fit->add_option("-R", fit_r, "Replications when generating from --case");
  fit->add_option("--pmax", fit_pmax, "Maximum candidate polynomial degree (-1: auto)");
  fit->add_option("--seed", fit_seed, "RNG seed");
  fit->add_option("--out", fit_out, "Output model JSON path")->required();

  // --- predict ---
  auto* pred = app.add_subcommand("predict", "Evaluate a fitted model at input points");
  std::string pred_model, pred_points, pred_x, pred_out, pred_quantiles, pred_pdf;
  pred->add_option("--model", pred_model, "Model JSON path")->required();
  pred->add_option("--points", pred_points, "CSV of input points (header x1,...,xM)");
  pred->add_option("--x", pred_x, "Single input point as comma-separated values");
  pred->add_option("--quantiles", pred_quantiles, "Quantile levels to report, e.g. 0.05,0.5,0.95");
  pred->add_option("--pdf", pred_pdf, "Output values to evaluate the density at");
  pred->add_option("--out", pred_out, "Output CSV path (default: stdout)");

  // --- benchmark ---
  auto* bench = app.add_subcommand("benchmark", "Reproduce the convergence-study protocol");
  std::string b_case, b_methods = "infer-mm,infer-mle,joint-mm,joint-mle", b_out, b_n, b_r;
  int b_reps = 1, b_pmax = -1, b_test = 1000, b_kde = 2000;
  std::uint64_t b_seed = 1;
  bench->add_option("--case", b_case, "Case name")->required();
  bench->add_option("--methods", b_methods, "Comma-separated method list");
  bench->add_option("-N", b_n, "Comma-separated design sizes")->required();
  bench->add_option("-R", b_r, "Comma-separated replication counts")->required();
  bench->add_option("--reps", b_reps, "Repetitions per scenario");
  bench->add_option("--pmax", b_pmax, "Maximum candidate polynomial degree (-1: auto)");
  bench->add_option("--test-points", b_test, "Sobol' test set size");
  bench->add_option("--kde-reps", b_kde, "KDE reference replications (sde case)");
  bench->add_option("--seed", b_seed, "RNG seed");
  bench->add_option("--out", b_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  if (sim->parsed()) {
    gldemu_dataset* d = nullptr;
    check(gldemu_simulate(sim_case.c_str(), sim_n, sim_r, sim_seed, &d));
    check(gldemu_dataset_save(d, sim_out.c_str()));
    gldemu_dataset_free(d);
    return 0;
  }

  if (fit->parsed()) {
    gldemu_dataset* d = nullptr;
    if (!fit_data.empty()) {
      check(gldemu_dataset_load(fit_data.c_str(), fit_case.empty() ? nullptr : fit_case.c_str(),
                                &d));
    } else if (!fit_case.empty()) {
      if (fit_n < 1 || fit_r < 1) {
        std::cerr << "error: -N and -R are required when generating data from --case\n";
        return 2;
      }
      check(gldemu_simulate(fit_case.c_str(), fit_n, fit_r, fit_seed, &d));
    } else {
      std::cerr << "error: fit needs --data or --case\n";
      return 2;
    }
    gldemu_model* m = nullptr;
    check(gldemu_fit(d, fit_method.c_str(), fit_pmax, fit_seed, &m));
    check(gldemu_model_save(m, fit_out.c_str()));
    gldemu_model_free(m);
    gldemu_dataset_free(d);
    return 0;
  }

  if (pred->parsed()) {
    gldemu_model* m = nullptr;
    check(gldemu_model_load(pred_model.c_str(), &m));
    int dim = 0;
    check(gldemu_model_input_dim(m, &dim));

    std::vector<std::vector<double>> pts;
    if (!pred_points.empty()) pts = load_points(pred_points, dim);
    if (!pred_x.empty()) {
      const auto v = parse_double_list(pred_x, "--x");
      if (static_cast<int>(v.size()) != dim) {
        std::cerr << "error: --x needs " << dim << " coordinates\n";
        return 2;
      }
      pts.push_back(v);
    }
    if (pts.empty()) {
      std::cerr << "error: predict needs --points or --x\n";
      return 2;
    }
    const auto qs = pred_quantiles.empty() ? std::vector<double>{}
                                           : parse_double_list(pred_quantiles, "--quantiles");
    const auto ys =
        pred_pdf.empty() ? std::vector<double>{} : parse_double_list(pred_pdf, "--pdf");

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!pred_out.empty()) {
      file.open(pred_out, std::ios::binary);
      if (!file) {
        std::cerr << "error: cannot open " << pred_out << "\n";
        return 3;
      }
      os = &file;
    }
    for (int j = 0; j < dim; ++j) *os << "x" << (j + 1) << ",";
    *os << "lambda1,lambda2,lambda3,lambda4,B_l,B_u";
    for (const double q : qs) *os << ",q_" << q;
    for (const double y : ys) *os << ",pdf_" << y;
    *os << "\n";
    for (const auto& x : pts) {
      double lam[4], lo, hi;
      check(gldemu_model_lambda(m, x.data(), dim, lam));
      check(gldemu_model_support(m, x.data(), dim, &lo, &hi));
      for (const double c : x) *os << fmt(c) << ",";
      *os << fmt(lam[0]) << "," << fmt(lam[1]) << "," << fmt(lam[2]) << "," << fmt(lam[3]) << ","
          << fmt(lo) << "," << fmt(hi);
      for (const double q : qs) {
        double v;
        check(gldemu_model_quantile(m, x.data(), dim, q, &v));
        *os << "," << fmt(v);
      }
      for (const double y : ys) {
        double v;
        check(gldemu_model_pdf(m, x.data(), dim, y, &v));
        *os << "," << fmt(v);
      }
      *os << "\n";
    }
    gldemu_model_free(m);
    return 0;
  }

  if (bench->parsed()) {
    const auto ns = parse_int_list(b_n, "-N");
    const auto rs = parse_int_list(b_r, "-R");
    gldemu_benchmark_config cfg;
    cfg.case_name = b_case.c_str();
    cfg.methods = b_methods.c_str();
    cfg.n_values = ns.data();
    cfg.n_count = static_cast<int>(ns.size());
    cfg.r_values = rs.data();
    cfg.r_count = static_cast<int>(rs.size());
    cfg.repetitions = b_reps;
    cfg.pmax = b_pmax;
    cfg.test_points = b_test;
    cfg.kde_replications = b_kde;
    cfg.seed = b_seed;
    check(gldemu_benchmark(&cfg, b_out.c_str()));
    return 0;
  }

  return 2;
}
