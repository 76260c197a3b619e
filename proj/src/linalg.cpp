#include "gmeact/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace gmeact {

namespace {

Tolerances g_tolerances{};

std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;) {
    strides[s - 1] = strides[s] * static_cast<std::size_t>(dims[s]);
  }
  return strides;
}

void check_dims(const Dims& dims, Eigen::Index size, const char* what) {
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument(std::string(what) + ": subsystem dimension < 1");
  }
  if (product(dims) != static_cast<std::size_t>(size)) {
    throw std::invalid_argument(std::string(what) +
                                ": product of dims does not match size " +
                                std::to_string(size));
  }
}

void check_permutation(std::span<const int> perm, std::size_t n) {
  if (perm.size() != n) throw std::invalid_argument("permutation length mismatch");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= n || seen[p]) {
      throw std::invalid_argument("not a permutation of subsystem indices");
    }
    seen[p] = true;
  }
}

// out_index -> in_index for a subsystem reordering.
std::vector<Eigen::Index> permutation_index_map(const Dims& dims,
                                                std::span<const int> perm) {
  check_permutation(perm, dims.size());
  const Dims out_dims = permute_dims(dims, perm);
  const auto in_strides = strides_of(dims);
  const auto out_strides = strides_of(out_dims);
  const std::size_t total = product(dims);
  std::vector<Eigen::Index> map(total);
  for (std::size_t y = 0; y < total; ++y) {
    std::size_t x = 0;
    for (std::size_t t = 0; t < perm.size(); ++t) {
      const std::size_t digit = (y / out_strides[t]) % out_dims[t];
      x += digit * in_strides[perm[t]];
    }
    map[y] = static_cast<Eigen::Index>(x);
  }
  return map;
}

}  // namespace

const Tolerances& tolerances() { return g_tolerances; }
void set_tolerances(const Tolerances& tol) { g_tolerances = tol; }

std::size_t product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); });
}

Ket::Ket(Vector amplitudes, Dims dims) : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
  check_dims(dims_, amps_.size(), "Ket");
  if (std::abs(amps_.norm() - 1.0) > tolerances().norm) {
    throw std::invalid_argument("Ket: amplitudes are not normalized (norm = " +
                                std::to_string(amps_.norm()) + ")");
  }
}

DensityMatrix::DensityMatrix(Matrix entries, Dims dims, Normalization norm)
    : m_(std::move(entries)), dims_(std::move(dims)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("DensityMatrix: not square");
  check_dims(dims_, m_.rows(), "DensityMatrix");
  const auto& tol = tolerances();
  if (!is_hermitian(m_, tol.hermitian)) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  if (norm == Normalization::Required && std::abs(trace_real(m_) - 1.0) > tol.trace) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
  if (min_eigenvalue(m_) < -tol.psd) {
    throw std::invalid_argument("DensityMatrix: not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::from_ket(const Ket& ket) {
  return DensityMatrix(ket.projector(), ket.dims());
}

DensityMatrix DensityMatrix::maximally_mixed(const Dims& dims) {
  const auto d = static_cast<Eigen::Index>(product(dims));
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d), dims);
}

double hermiticity_error(const Matrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& h, double tol) {
  return h.rows() == h.cols() && (h.size() == 0 || hermiticity_error(h) <= tol);
}

Eigensystem eig_hermitian(const Matrix& h) {
  if (!is_hermitian(h, 1e-10)) {
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  }
  // Eigen reads only the lower triangle; symmetrize so round-off in the
  // upper triangle is not silently dropped.
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix& h) {
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

Ket tensor(const Ket& a, const Ket& b) {
  Vector v = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return Ket(std::move(v), std::move(dims));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(kron(a.matrix(), b.matrix()), std::move(dims));
}

Dims permute_dims(const Dims& dims, std::span<const int> perm) {
  check_permutation(perm, dims.size());
  Dims out(dims.size());
  for (std::size_t t = 0; t < perm.size(); ++t) out[t] = dims[perm[t]];
  return out;
}

std::vector<int> inverse_permutation(std::span<const int> perm) {
  check_permutation(perm, perm.size());
  std::vector<int> inv(perm.size());
  for (std::size_t t = 0; t < perm.size(); ++t) inv[perm[t]] = static_cast<int>(t);
  return inv;
}

Matrix permute_subsystems(const Matrix& m, const Dims& dims, std::span<const int> perm) {
  check_dims(dims, m.rows(), "permute_subsystems");
  const auto map = permutation_index_map(dims, perm);
  const Eigen::Index d = m.rows();
  Matrix out(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) out(r, c) = m(map[r], map[c]);
  }
  return out;
}

Vector permute_subsystems(const Vector& v, const Dims& dims, std::span<const int> perm) {
  check_dims(dims, v.size(), "permute_subsystems");
  const auto map = permutation_index_map(dims, perm);
  Vector out(v.size());
  for (Eigen::Index r = 0; r < v.size(); ++r) out(r) = v(map[r]);
  return out;
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const int> perm) {
  return DensityMatrix(permute_subsystems(rho.matrix(), rho.dims(), perm),
                       permute_dims(rho.dims(), perm), Normalization::Unnormalized);
}

Matrix partial_transpose(const Matrix& m, const Dims& dims, std::span<const int> subsystems) {
  check_dims(dims, m.rows(), "partial_transpose");
  if (subsystems.empty()) return m;
  const auto strides = strides_of(dims);
  for (int s : subsystems) {
    if (s < 0 || static_cast<std::size_t>(s) >= dims.size()) {
      throw std::invalid_argument("partial_transpose: subsystem index out of range");
    }
  }
  const Eigen::Index d = m.rows();
  // Portion of each index that belongs to the transposed subsystems.
  std::vector<Eigen::Index> part(d, 0);
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::Index acc = 0;
    for (int s : subsystems) {
      const auto digit = (static_cast<std::size_t>(i) / strides[s]) % dims[s];
      acc += static_cast<Eigen::Index>(digit * strides[s]);
    }
    part[i] = acc;
  }
  Matrix out(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      const Eigen::Index rr = r - part[r] + part[c];
      const Eigen::Index cc = c - part[c] + part[r];
      out(r, c) = m(rr, cc);
    }
  }
  return out;
}

Matrix partial_transpose(const DensityMatrix& rho, std::span<const int> subsystems) {
  return partial_transpose(rho.matrix(), rho.dims(), subsystems);
}

Matrix partial_trace(const Matrix& m, const Dims& dims, std::span<const int> traced) {
  check_dims(dims, m.rows(), "partial_trace");
  std::vector<int> keep;
  std::vector<bool> is_traced(dims.size(), false);
  for (int s : traced) {
    if (s < 0 || static_cast<std::size_t>(s) >= dims.size()) {
      throw std::invalid_argument("partial_trace: subsystem index out of range");
    }
    is_traced[s] = true;
  }
  std::vector<int> perm;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (!is_traced[s]) perm.push_back(static_cast<int>(s));
  }
  const auto kept = perm.size();
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (is_traced[s]) perm.push_back(static_cast<int>(s));
  }
  const Matrix reordered = permute_subsystems(m, dims, perm);
  const Dims pdims = permute_dims(dims, perm);
  const auto dk = static_cast<Eigen::Index>(product(std::span(pdims).first(kept)));
  const auto dt = static_cast<Eigen::Index>(product(std::span(pdims).subspan(kept)));
  Matrix out = Matrix::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      cplx acc{0.0, 0.0};
      for (Eigen::Index t = 0; t < dt; ++t) acc += reordered(a * dt + t, b * dt + t);
      out(a, b) = acc;
    }
  }
  return out;
}

double trace_real(const Matrix& m) { return m.trace().real(); }

double hs_inner(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

double purity(const Matrix& rho) { return hs_inner(rho, rho); }
double purity(const DensityMatrix& rho) { return purity(rho.matrix()); }

namespace {

Matrix psd_sqrt(const Matrix& m) {
  const auto es = eig_hermitian(m);
  const RealVector roots = es.values.cwiseMax(0.0).cwiseSqrt();
  return es.vectors * roots.asDiagonal() * es.vectors.adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.size() != sigma.size()) throw std::invalid_argument("fidelity: dimension mismatch");
  const double tol = tolerances().psd;
  if (min_eigenvalue(rho.matrix()) < -tol || min_eigenvalue(sigma.matrix()) < -tol) {
    throw std::invalid_argument("fidelity: input is not positive semidefinite");
  }
  const Matrix s = psd_sqrt(rho.matrix());
  const Matrix inner = s * sigma.matrix() * s;
  const auto es = eig_hermitian(0.5 * (inner + inner.adjoint()));
  const double root_sum = es.values.cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

Matrix project_psd(const Matrix& h) {
  const auto es = eig_hermitian(h);
  const RealVector clamped = es.values.cwiseMax(0.0);
  return es.vectors * clamped.asDiagonal() * es.vectors.adjoint();
}

}  // namespace gmeact
