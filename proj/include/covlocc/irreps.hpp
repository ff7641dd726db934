#pragma once

// SU(2) representation machinery for the four covariance scenarios.
//
// Each scenario has a raw group element g acting on (A_out, B_out, A_in, B_in)
// and a similarity transform S with S g S^dagger equal to a canonical element
// whose commutant is spanned by isomorphisms between equivalent irreps.
// Choi matrices are parameterized as R = S^dagger (sum_k x_k Bt_k) S.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "covlocc/linalg.hpp"

namespace covlocc {

enum class Scenario {
  kSemiCovariant,     // V1 = V2 = 1 (x) U
  kFullSimultaneous,  // V1 = V2 = U (x) U
  kFullIndependent,   // V1 = V2 = U1 (x) U2
  kProtocol,          // V1 = U (x) 1, V2 = 1 (x) U
};

inline constexpr Scenario kAllScenarios[] = {Scenario::kSemiCovariant, Scenario::kFullSimultaneous,
                                            Scenario::kFullIndependent, Scenario::kProtocol};

/// CLI tag: semicov | full-sim | full-ind | protocol.
std::string_view scenario_tag(Scenario s);
/// Inverse of scenario_tag; throws std::invalid_argument on unknown tags.
Scenario parse_scenario(std::string_view tag);

struct TwoQubitProjectors {
  Matrix symmetric;      // rank 3
  Matrix antisymmetric;  // |psi-><psi-|
};

TwoQubitProjectors two_qubit_projectors();

/// One irreducible block D^(J) copy k, vectors ordered m = J, ..., -J.
struct IrrepBlock {
  int total_momentum;
  int copy;  // 1-based
  std::vector<Vector> vectors;
};

struct IrrepBasis {
  std::vector<IrrepBlock> blocks;

  [[nodiscard]] const IrrepBlock& block(int total_momentum, int copy) const;
  [[nodiscard]] int multiplicity(int total_momentum) const;
  /// All vectors as columns, block by block.
  [[nodiscard]] Matrix as_columns() const;
};

/// Orthonormal irrep basis of the four-qubit space (U (x) U (x) U (x) U),
/// blocks D0_11, D0_22, D1_11, D1_22, D1_33, D2_11 (D1_33 carries an overall
/// minus sign).
IrrepBasis standard_irrep_basis();

/// sum_m |J,k,m><J,l,m| (1-based copies). Throws std::out_of_range.
Matrix isomorphism_operator(const IrrepBasis& basis, int total_momentum, int k, int l);

/// Raw group element g(U1, U2) on (A_out, B_out, A_in, B_in). Scenarios with a
/// single rotation ignore u2.
Matrix group_element(Scenario s, const Matrix& u1, const Matrix& u2);
/// Canonical element S g S^dagger whose commutant the ansatz spans.
Matrix canonical_group_element(Scenario s, const Matrix& u1, const Matrix& u2);

Matrix scenario_similarity(Scenario s);

struct AnsatzTerm {
  std::string label;
  Matrix basis;      // original frame, S^dagger Bt S
  Matrix canonical;  // Bt, commutes with the canonical group element
};

struct CovariantAnsatz {
  Scenario scenario;
  Matrix similarity;
  std::vector<AnsatzTerm> terms;

  [[nodiscard]] int parameter_count() const { return static_cast<int>(terms.size()); }
  [[nodiscard]] int index_of(std::string_view label) const;  // -1 when absent
  /// sum_k x_k B_k.
  [[nodiscard]] Matrix assemble(const RealVector& x) const;
  /// Coordinates of a matrix in the commutant (least squares on the basis).
  [[nodiscard]] RealVector coordinates(const Matrix& m) const;
};

CovariantAnsatz build_ansatz(Scenario s);

/// Real dimension of {X Hermitian : [X, g] = 0} for `samples` random
/// group elements, computed from the null space of the stacked commutator map.
int numerical_commutant_dimension(Scenario s, int samples, std::uint64_t seed);

}  // namespace covlocc
