#pragma once

// Dense complex linear algebra over small multi-qubit registers.
//
// Basis convention: subsystem 0 is the most significant digit of the
// computational basis label, so for six qubits ordered A1A2B1B2C1C2 the
// basis index of |i5 i4 ... i0> is the binary number i5 i4 ... i0.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gmeact {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

/// Numerical tolerances shared by all validity checks. Set once at startup
/// (e.g. from a config file) before any concurrent work begins.
struct Tolerances {
  double hermitian = 1e-10;
  double psd = 1e-10;
  double trace = 1e-10;
  double norm = 1e-12;
};

const Tolerances& tolerances();
void set_tolerances(const Tolerances& tol);

std::size_t product(std::span<const int> dims);

/// Unit vector over a register with explicit subsystem dimensions.
class Ket {
 public:
  Ket(Vector amplitudes, Dims dims);

  const Vector& amplitudes() const { return amps_; }
  const Dims& dims() const { return dims_; }
  Eigen::Index size() const { return amps_.size(); }

  /// |psi><psi|
  Matrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  Vector amps_;
  Dims dims_;
};

enum class Normalization { Required, Unnormalized };

/// Hermitian, positive semidefinite operator over a register. Unit trace is
/// enforced unless constructed with Normalization::Unnormalized.
class DensityMatrix {
 public:
  DensityMatrix(Matrix entries, Dims dims,
                Normalization norm = Normalization::Required);

  static DensityMatrix from_ket(const Ket& ket);
  static DensityMatrix maximally_mixed(const Dims& dims);

  const Matrix& matrix() const { return m_; }
  const Dims& dims() const { return dims_; }
  Eigen::Index size() const { return m_.rows(); }

 private:
  Matrix m_;
  Dims dims_;
};

struct Eigensystem {
  RealVector values;  // ascending
  Matrix vectors;     // columns are orthonormal eigenvectors
};

bool is_hermitian(const Matrix& h, double tol);
double hermiticity_error(const Matrix& h);

/// Throws std::invalid_argument when H is not Hermitian within 1e-10.
Eigensystem eig_hermitian(const Matrix& h);
double min_eigenvalue(const Matrix& h);

Ket tensor(const Ket& a, const Ket& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Reorders tensor factors: output position t holds input subsystem perm[t].
Matrix permute_subsystems(const Matrix& m, const Dims& dims,
                          std::span<const int> perm);
DensityMatrix permute_subsystems(const DensityMatrix& rho,
                                 std::span<const int> perm);
Vector permute_subsystems(const Vector& v, const Dims& dims,
                          std::span<const int> perm);
Dims permute_dims(const Dims& dims, std::span<const int> perm);
std::vector<int> inverse_permutation(std::span<const int> perm);

/// Transpose of the tensor factors listed in `subsystems`. Pure index
/// permutation, so applying it twice is exactly the identity.
Matrix partial_transpose(const Matrix& m, const Dims& dims,
                         std::span<const int> subsystems);
Matrix partial_transpose(const DensityMatrix& rho,
                         std::span<const int> subsystems);

/// Partial trace over the listed subsystems.
Matrix partial_trace(const Matrix& m, const Dims& dims,
                     std::span<const int> traced);

double purity(const DensityMatrix& rho);
double purity(const Matrix& rho);
/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// Re Tr[A^dagger B]; exact Tr[A B] for Hermitian pairs.
double hs_inner(const Matrix& a, const Matrix& b);
double trace_real(const Matrix& m);

/// Frobenius-nearest positive semidefinite matrix (negative eigenvalues
/// clamped to zero).
Matrix project_psd(const Matrix& h);

}  // namespace gmeact
