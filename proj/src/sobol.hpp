#pragma once

#include <Eigen/Dense>

namespace gldemu {

inline constexpr int kSobolMaxDim = 21;

// First n points of the m-dimensional Sobol' sequence in natural order,
// skipping the all-zero point (i.e. sequence indices 1..n). Joe-Kuo
// direction numbers, no scrambling. Throws for m outside [1, 21].
Eigen::MatrixXd sobol_points(int m, int n);

}  // namespace gldemu
