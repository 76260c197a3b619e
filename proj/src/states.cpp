#include "gmeact/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gmeact {

namespace {

const Dims kQubit3{2, 2, 2};

Vector basis_ket(int dim, int index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

void check_index(int i) {
  if (i < 0 || i >= kNumConstituents) {
    throw std::out_of_range("constituent index " + std::to_string(i) + " outside 0..9");
  }
}

Vector base_constituent(int sign_index) {
  const double r = 1.0 / std::sqrt(2.0);
  const double s = sign_index == 0 ? 1.0 : -1.0;
  Vector pm(2);
  pm << r, s * r;
  Vector phi(4);
  phi << r, 0.0, 0.0, s * r;
  return kron(pm, phi);
}

}  // namespace

std::string_view to_string(Bipartition b) {
  switch (b) {
    case Bipartition::A_BC: return "A|BC";
    case Bipartition::B_AC: return "B|AC";
    case Bipartition::FullyProduct: return "A|B|C";
  }
  return "?";
}

int split_subsystem(Bipartition b) {
  switch (b) {
    case Bipartition::A_BC: return 0;
    case Bipartition::B_AC: return 1;
    case Bipartition::FullyProduct: return 0;
  }
  return 0;
}

Ket constituent_ket(int i) {
  check_index(i);
  if (i == 8) return Ket(basis_ket(8, 0b001), kQubit3);
  if (i == 9) return Ket(basis_ket(8, 0b110), kQubit3);

  const int base = i % 4;
  Vector v = base_constituent(base % 2);
  if (base >= 2) {
    const cplx I{0.0, 1.0};
    // sqrtZ (x) sqrtZ (x) Z is diagonal: phase i^(a+b) (-1)^c on |abc>.
    for (int idx = 0; idx < 8; ++idx) {
      const int a = (idx >> 2) & 1;
      const int b = (idx >> 1) & 1;
      const int c = idx & 1;
      cplx phase = std::pow(I, a + b);
      if (c) phase = -phase;
      v(idx) *= phase;
    }
  }
  if (i >= 4) {
    const std::array<int, 3> swap_ab{1, 0, 2};
    v = permute_subsystems(v, kQubit3, swap_ab);
  }
  return Ket(std::move(v), kQubit3);
}

Bipartition constituent_bipartition(int i) {
  check_index(i);
  if (i < 4) return Bipartition::A_BC;
  if (i < 8) return Bipartition::B_AC;
  return Bipartition::FullyProduct;
}

ConstituentSet constituent_set() {
  ConstituentSet set;
  for (int i = 0; i < kNumConstituents; ++i) {
    set.kets.push_back(constituent_ket(i));
    set.labels.push_back(constituent_bipartition(i));
  }
  return set;
}

MixtureSpec mixture_spec(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("noise fraction q must lie in [0, 1]");
  }
  MixtureSpec spec;
  spec.q = q;
  for (int i = 0; i < kNumConstituents; ++i) {
    spec.weights[i] = i < kNumEntangledConstituents ? (1.0 - q) / 8.0 : q / 2.0;
  }
  return spec;
}

DensityMatrix single_copy_state(double q) {
  const auto spec = mixture_spec(q);
  Matrix rho = Matrix::Zero(8, 8);
  for (int i = 0; i < kNumConstituents; ++i) {
    if (spec.weights[i] == 0.0) continue;
    rho += spec.weights[i] * constituent_ket(i).projector();
  }
  return DensityMatrix(std::move(rho), kQubit3);
}

std::vector<int> party_major_permutation(int copies) {
  std::vector<int> perm;
  for (int party = 0; party < 3; ++party) {
    for (int c = 0; c < copies; ++c) perm.push_back(3 * c + party);
  }
  return perm;
}

DensityMatrix n_copy_state(double q, int copies) {
  if (copies < 1) throw std::invalid_argument("copies must be >= 1");
  if (copies > 3) throw std::invalid_argument("copies > 3 exceeds dense storage limits");
  const DensityMatrix single = single_copy_state(q);
  DensityMatrix joint = single;
  for (int c = 1; c < copies; ++c) joint = tensor(joint, single);
  if (copies == 1) return joint;
  const auto perm = party_major_permutation(copies);
  return DensityMatrix(permute_subsystems(joint.matrix(), joint.dims(), perm),
                       Dims(3 * copies, 2));
}

DensityMatrix constituent_pair(int i, int j) {
  const Ket joint = tensor(constituent_ket(i), constituent_ket(j));
  const auto perm = party_major_permutation(2);
  Vector v = permute_subsystems(joint.amplitudes(), joint.dims(), perm);
  return DensityMatrix::from_ket(Ket(std::move(v), Dims(6, 2)));
}

}  // namespace gmeact
