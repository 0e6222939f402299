#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace majoq {

// Deterministic helpers on top of mt19937_64. The standard distribution
// objects are implementation-defined; these are not.

inline double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = rng();
  while (x >= limit) {
    x = rng();
  }
  return x % n;
}

template <typename T>
void shuffle_in_place(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
  }
}

/// Random point on the probability simplex (exponential spacings).
inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t d) {
  std::vector<double> v(d);
  double sum = 0.0;
  for (double& x : v) {
    double u = uniform_double(rng);
    while (u <= 0.0) {
      u = uniform_double(rng);
    }
    x = -std::log(u);
    sum += x;
  }
  for (double& x : v) {
    x /= sum;
  }
  return v;
}

}  // namespace majoq
