#pragma once

#include <random>

#include "gmeact/linalg.hpp"
#include "gmeact/rng.hpp"

namespace testing {

inline gmeact::Matrix random_hermitian(std::mt19937_64& g, Eigen::Index d) {
  gmeact::Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {gmeact::standard_normal(g), gmeact::standard_normal(g)};
  return (a + a.adjoint()) / 2.0;
}

// Ginibre-distributed full-rank density matrix.
inline gmeact::Matrix random_density(std::mt19937_64& g, Eigen::Index d) {
  gmeact::Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {gmeact::standard_normal(g), gmeact::standard_normal(g)};
  gmeact::Matrix r = a * a.adjoint();
  return r / r.trace().real();
}

inline gmeact::Matrix pure(const gmeact::Vector& v) { return v * v.adjoint(); }

inline gmeact::Vector basis_ket(Eigen::Index d, Eigen::Index k) {
  gmeact::Vector v = gmeact::Vector::Zero(d);
  v(k) = 1.0;
  return v;
}

}  // namespace testing
