#pragma once

#include <array>
#include <string>

#include "gld.hpp"
#include "pce.hpp"

#include <nlohmann/json_fwd.hpp>

namespace gldemu {

// The complete stochastic emulator: one expansion per distribution parameter,
// with an exponential link keeping lambda2(x) strictly positive.
struct LambdaSurrogate {
  std::array<PceModel, 4> pc;  // pc[1] models log(lambda2)
  InputModel input;

  std::array<double, 4> lambda(const VectorXd& x) const;
  GldParams params_at(const VectorXd& x) const;
};

// Flattened coefficient vector (a_1, a_2, a_3, a_4) aligned with the four
// truncation sets; round-trips losslessly with with_coefficients.
VectorXd flatten(const LambdaSurrogate& s);
LambdaSurrogate with_coefficients(const LambdaSurrogate& proto, const VectorXd& a);

// Versioned JSON model file. `method` names the fitted variant and
// `fit_report` carries free-form fitting diagnostics.
struct ModelFile {
  LambdaSurrogate surrogate;
  std::string method;
  std::string fit_report_json;  // serialized object, may be empty
};

void save_model(const ModelFile& m, const std::string& path);
ModelFile load_model(const std::string& path);

}  // namespace gldemu
