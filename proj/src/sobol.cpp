#include "sobol.hpp"

#include <array>
#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace gldemu {

namespace {

constexpr int kBits = 32;

// Joe & Kuo primitive polynomials (full bit encoding) and initial direction
// numbers for dimensions 2..21. Dimension 1 is the radical-inverse column
// (all m_k = 1).
struct DimInit {
  std::uint32_t poly;
  std::array<std::uint32_t, 7> m;
  int s;
};

constexpr DimInit kDims[20] = {
    {3, {1}, 1},
    {7, {1, 3}, 2},
    {11, {1, 3, 1}, 3},
    {13, {1, 1, 1}, 3},
    {19, {1, 1, 3, 3}, 4},
    {25, {1, 3, 5, 13}, 4},
    {37, {1, 1, 5, 5, 17}, 5},
    {41, {1, 1, 5, 5, 5}, 5},
    {47, {1, 1, 7, 11, 19}, 5},
    {55, {1, 1, 5, 1, 1}, 5},
    {59, {1, 1, 1, 3, 11}, 5},
    {61, {1, 3, 5, 5, 31}, 5},
    {67, {1, 3, 3, 9, 7, 49}, 6},
    {91, {1, 1, 1, 15, 21, 21}, 6},
    {97, {1, 3, 1, 13, 27, 49}, 6},
    {103, {1, 1, 1, 15, 7, 5}, 6},
    {109, {1, 3, 1, 15, 13, 25}, 6},
    {115, {1, 1, 5, 5, 19, 61}, 6},
    {131, {1, 3, 7, 11, 23, 15, 103}, 7},
    {137, {1, 3, 7, 13, 13, 15, 69}, 7},
};

void direction_numbers(int dim_index, std::vector<std::uint32_t>& v) {
  if (dim_index == 0) {
    for (int k = 0; k < kBits; ++k) v[k] = 1u << (kBits - 1 - k);
    return;
  }
  const DimInit& di = kDims[dim_index - 1];
  const int s = di.s;
  for (int k = 0; k < s && k < kBits; ++k) v[k] = di.m[k] << (kBits - 1 - k);
  for (int k = s; k < kBits; ++k) {
    std::uint32_t vk = v[k - s] ^ (v[k - s] >> s);
    for (int i = 1; i < s; ++i)
      if ((di.poly >> (s - i)) & 1u) vk ^= v[k - i];
    v[k] = vk;
  }
}

}  // namespace

Eigen::MatrixXd sobol_points(int m, int n) {
  if (m < 1 || m > kSobolMaxDim)
    throw InvalidArgument("sobol_points: dimension must be in [1, " +
                          std::to_string(kSobolMaxDim) + "]");
  if (n < 0) throw InvalidArgument("sobol_points: n must be >= 0");

  std::vector<std::vector<std::uint32_t>> v(m, std::vector<std::uint32_t>(kBits));
  for (int j = 0; j < m; ++j) direction_numbers(j, v[j]);

  Eigen::MatrixXd pts(n, m);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t idx = static_cast<std::uint32_t>(i + 1);  // skip the zero point
    for (int j = 0; j < m; ++j) {
      std::uint32_t acc = 0;
      for (int b = 0; b < kBits; ++b)
        if (idx & (1u << b)) acc ^= v[j][b];
      pts(i, j) = static_cast<double>(acc) * 0x1.0p-32;
    }
  }
  return pts;
}

}  // namespace gldemu
