#pragma once

// Dense complex-matrix primitives used by the channel, irrep and SDP layers.
//
// Multi-qubit operators follow one global ordering: basis state
// |q1 q2 ... qn> with q1 the most significant bit. For Choi matrices of
// two-qubit channels the four factors are (A_out, B_out, A_in, B_in).

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace covlocc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Raised when an operator's shape does not match the declared tensor layout.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an input violates an operation's documented precondition.
class ContractViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Local dimensions of the tensor factors an operator acts on.
class SubsystemDims {
 public:
  SubsystemDims(std::initializer_list<int> dims);
  explicit SubsystemDims(std::vector<int> dims);

  /// n factors of dimension 2.
  static SubsystemDims qubits(int n);

  [[nodiscard]] int count() const { return static_cast<int>(dims_.size()); }
  [[nodiscard]] int operator[](int i) const { return dims_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] int total() const;
  [[nodiscard]] const std::vector<int>& values() const { return dims_; }

  /// Throws DimensionError unless `m` is square with side total().
  void require_matches(const Matrix& m) const;

 private:
  std::vector<int> dims_;
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron(std::initializer_list<Matrix> factors);

/// Trace over every factor not listed in `keep`. The kept factors retain
/// their original relative order.
Matrix partial_trace(const Matrix& m, const SubsystemDims& dims, const std::vector<int>& keep);

/// Transpose on the listed factors only.
Matrix partial_transpose(const Matrix& m, const SubsystemDims& dims,
                         const std::vector<int>& transposed);

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns, same order as values
};

/// Eigendecomposition of a Hermitian matrix. Throws ContractViolation when
/// the input deviates from Hermitian by more than 1e-10 (max entry).
HermitianEigen eig_hermitian(const Matrix& m);

/// Smallest eigenvalue of a Hermitian matrix (hermitized before solving).
double min_eigenvalue(const Matrix& m);

/// Largest absolute entry of m - m^dagger.
double hermiticity_defect(const Matrix& m);

/// Random SU(2) element: Gaussian columns, Gram-Schmidt, phase fixed to det 1.
/// Deterministic for a given seed.
Matrix haar_su2(std::uint64_t seed);

namespace ops {
Matrix identity(int n);
Matrix pauli_x();
Matrix pauli_y();  // [[0, -i], [i, 0]]
Matrix pauli_z();
Matrix swap();  // two-qubit SWAP
/// Computational basis ket of an n-qubit register given as a bit string, e.g. "0110".
Vector ket(const std::string& bits);
}  // namespace ops

}  // namespace covlocc
