#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pce.hpp"

namespace gldemu {

// Experimental design with R replicated simulator outputs per design point.
struct ReplicatedDesign {
  MatrixXd X;  // N x M design points
  MatrixXd Y;  // N x R outputs
  InputModel input;
  std::uint64_t seed = 0;  // provenance

  int n_points() const { return static_cast<int>(X.rows()); }
  int dim() const { return static_cast<int>(X.cols()); }
  int replications() const { return static_cast<int>(Y.cols()); }
};

// Validates shapes, finiteness, R >= 1 and the no-duplicate-rows invariant.
ReplicatedDesign make_design(MatrixXd X, MatrixXd Y, InputModel input, std::uint64_t seed = 0);

// Long-format CSV: header "x1,...,xM,rep,y", one row per (point, replication),
// '.' decimal, LF newlines, 17 significant digits.
void save_csv(const ReplicatedDesign& d, const std::string& path);

// Loads the long format; when no input model is given, uniform marginals are
// inferred from the per-dimension data ranges. Parse errors carry line
// numbers.
ReplicatedDesign load_csv(const std::string& path, std::optional<InputModel> input = std::nullopt);

}  // namespace gldemu
