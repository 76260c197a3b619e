#pragma once

// The ten three-qubit constituents and the mixtures built from them.
//
//   |a0,1> = |+/->_A (x) |Phi+/->_BC
//   |a2,3> = (sqrtZ (x) sqrtZ (x) Z) |a0,1>,  sqrtZ = diag(1, i)
//   |a4..7> = |a0..3> with qubits A and B swapped
//   |a8> = |001>,  |a9> = |110>
//
// rho(q) = (1-q)/8 sum_{i<8} |a_i><a_i| + q/2 (|a8><a8| + |a9><a9|)

#include <array>
#include <string_view>
#include <vector>

#include "gmeact/linalg.hpp"

namespace gmeact {

inline constexpr int kNumConstituents = 10;
inline constexpr int kNumEntangledConstituents = 8;

/// Bipartition across which a constituent is a product state.
enum class Bipartition { A_BC, B_AC, FullyProduct };

std::string_view to_string(Bipartition b);
/// The single subsystem split off by an A|BC or B|AC cut (0 or 1).
int split_subsystem(Bipartition b);

/// Throws std::out_of_range for i outside 0..9.
Ket constituent_ket(int i);
Bipartition constituent_bipartition(int i);

struct ConstituentSet {
  std::vector<Ket> kets;
  std::vector<Bipartition> labels;
};

ConstituentSet constituent_set();

struct MixtureSpec {
  double q = 0.0;
  std::array<double, kNumConstituents> weights{};
};

/// Throws std::invalid_argument unless 0 <= q <= 1.
MixtureSpec mixture_spec(double q);

DensityMatrix single_copy_state(double q);

/// Party-major ordering A1..An B1..Bn C1..Cn of n three-qubit copies.
std::vector<int> party_major_permutation(int copies);

/// rho(q)^(x)n rearranged to party-major order. Throws for n < 1 or n > 3.
DensityMatrix n_copy_state(double q, int copies);

/// |a_i><a_i| (x) |a_j><a_j| rearranged to A1A2B1B2C1C2.
DensityMatrix constituent_pair(int i, int j);

}  // namespace gmeact
