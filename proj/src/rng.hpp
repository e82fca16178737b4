#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gldemu {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives an independent stream seed for a (point, replication) pair, so that
// replicated runs are reproducible regardless of evaluation order.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t i, std::uint64_t r) {
  return splitmix64(splitmix64(seed ^ (i * 0x9e3779b97f4a7c15ull)) ^ r);
}

// mt19937_64 wrapper with explicit variate generation. The standard engine is
// bit-exact across implementations; the distributions in <random> are not, so
// uniform/normal draws are generated here.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller (one fresh pair per call)
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  std::uint64_t next_u64() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

}  // namespace gldemu
