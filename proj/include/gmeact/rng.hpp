#pragma once

// Deterministic random streams.
//
// Every independent unit of work (a shot-table cell, a restart) gets its own
// mt19937_64 seeded by hashing (seed, i, j, k) with splitmix64, so results
// do not depend on evaluation order.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "gmeact/linalg.hpp"

namespace gmeact {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 derived_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(seed);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return std::mt19937_64(h);
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

/// Standard normal by Box-Muller on uniform01 (platform independent).
inline double standard_normal(std::mt19937_64& g) {
  double u1 = uniform01(g);
  while (u1 <= 0.0) u1 = uniform01(g);
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Index drawn from a discrete distribution by inverse CDF.
inline std::size_t sample_index(std::mt19937_64& g, const std::vector<double>& cdf) {
  const double u = uniform01(g) * cdf.back();
  std::size_t lo = 0;
  std::size_t hi = cdf.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (cdf[mid] > u) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

/// Haar-random unit vector of dimension d.
inline Vector random_unit_vector(std::mt19937_64& g, Eigen::Index d) {
  Vector v(d);
  for (Eigen::Index k = 0; k < d; ++k) v(k) = cplx(standard_normal(g), standard_normal(g));
  return v / v.norm();
}

}  // namespace gmeact
