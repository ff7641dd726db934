#pragma once

// Choi-Jamiolkowski representation of two-qubit channels.
//
//   R = (M (x) 1)(P+),     M(rho) = Tr_in[(1 (x) rho^T) R],
//
// with P+ = sum_ij |ii><jj| left unnormalized (trace 4). Factor order of R is
// (A_out, B_out, A_in, B_in).

#include <variant>
#include <vector>

#include "covlocc/linalg.hpp"

namespace covlocc {

/// Qubit factor positions inside a 16x16 Choi matrix.
namespace factor {
inline constexpr int kAliceOut = 0;
inline constexpr int kBobOut = 1;
inline constexpr int kAliceIn = 2;
inline constexpr int kBobIn = 3;
}  // namespace factor

class NotCompletelyPositive : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// a|00> + sqrt(1 - a^2)|11>.
class SchmidtState {
 public:
  explicit SchmidtState(double schmidt);

  [[nodiscard]] double schmidt() const { return schmidt_; }
  [[nodiscard]] Vector ket() const;
  [[nodiscard]] Matrix density() const;

 private:
  double schmidt_;
};

/// Either a Schmidt-form pure state or an explicit 4x4 density matrix.
using StateInput = std::variant<SchmidtState, Matrix>;

Matrix density_of(const StateInput& state);

class ChoiMatrix {
 public:
  /// Wraps a 16x16 Hermitian matrix (checked to 1e-10).
  explicit ChoiMatrix(Matrix m);

  [[nodiscard]] const Matrix& matrix() const { return m_; }

  /// The identity channel, i.e. P+ for d = 4.
  static ChoiMatrix identity_channel();
  /// Replaces every input by I/4.
  static ChoiMatrix fully_depolarizing();

 private:
  Matrix m_;
};

using KrausSet = std::vector<Matrix>;

/// Unnormalized sum_{i,j} |ii><jj| on C^d (x) C^d.
Matrix plus_operator(int d);

/// M(rho). When `strict` is set, a non-unit output trace (beyond 1e-8) raises
/// ContractViolation.
Matrix apply_channel(const ChoiMatrix& choi, const Matrix& rho_in, bool strict = false);

/// sum_i A_i rho A_i^dagger, the reference action of a Kraus set.
Matrix apply_channel(const KrausSet& kraus, const Matrix& rho_in);

ChoiMatrix choi_from_kraus(const KrausSet& kraus);

/// Eigenvectors with eigenvalue above 1e-10 * lambda_max become operators
/// sqrt(lambda) * reshape(v). Throws NotCompletelyPositive below -1e-8.
KrausSet kraus_from_choi(const ChoiMatrix& choi);

/// Frobenius norm of Tr_out R - I_4.
double check_tp(const ChoiMatrix& choi);

/// || sum A_i^dagger A_i - I ||_F.
double kraus_tp_residual(const KrausSet& kraus);

/// Smallest eigenvalue of R with Bob's factors (B_out, B_in) transposed.
/// Non-negative (to -1e-8) means the channel is PPT across Alice | Bob.
double check_ppt(const ChoiMatrix& choi);

/// Smallest eigenvalue of R itself.
double check_cp(const ChoiMatrix& choi);

/// Tr[(rho_out (x) rho_in^T) R].
double channel_fidelity(const ChoiMatrix& choi, const StateInput& input, const StateInput& target);

/// Same functional on a raw 16x16 matrix. Linear in `r`.
double fidelity_functional(const Matrix& r, const Matrix& rho_in, const Matrix& rho_out);

}  // namespace covlocc
