#include "doctest.h"
#include "support.hpp"

using namespace covlocc;
using covlocc::testing::random_hermitian;
using covlocc::testing::random_matrix;

TEST_SUITE("linalg") {

TEST_CASE("kron of identities and Pauli phases") {
  CHECK((kron(ops::identity(2), ops::identity(2)) - ops::identity(4)).norm() == 0.0);
  const Vector out = kron(ops::pauli_y(), ops::pauli_y()) * ops::ket("00");
  CHECK((out + ops::ket("11")).norm() < 1e-15);
}

TEST_CASE("kron trace factorizes") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix a = random_matrix(2, 2, s);
    const Matrix b = random_matrix(2, 2, s + 100);
    CHECK(std::abs(kron(a, b).trace() - a.trace() * b.trace()) < 1e-12);
  }
}

TEST_CASE("kron is associative on integer matrices") {
  Matrix a(2, 2), b(2, 3), c(3, 1);
  a << 1, 2, 3, 4;
  b << 0, -1, 5, 2, 2, 7;
  c << 3, -2, 1;
  CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).norm() == 0.0);
  CHECK((kron({a, b, c}) - kron(a, kron(b, c))).norm() == 0.0);
}

TEST_CASE("partial trace examples") {
  const SubsystemDims two = SubsystemDims::qubits(2);
  const Vector k00 = ops::ket("00");
  const Matrix r = partial_trace(k00 * k00.adjoint(), two, {0});
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  CHECK((r - expected).norm() < 1e-15);

  const Vector bell = (ops::ket("00") + ops::ket("11")) / std::sqrt(2.0);
  CHECK((partial_trace(bell * bell.adjoint(), two, {0}) - 0.5 * ops::identity(2)).norm() < 1e-15);

  // Out half of P+ for d = 4 is the identity.
  const Matrix tr_out = partial_trace(plus_operator(4), SubsystemDims{4, 4}, {1});
  CHECK((tr_out - ops::identity(4)).norm() < 1e-14);
}

TEST_CASE("partial trace of a product keeps the factor") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Matrix a = random_matrix(2, 2, s);
    const Matrix b = random_matrix(4, 4, s + 7);
    const Matrix kept = partial_trace(kron(a, b), SubsystemDims{2, 4}, {0});
    CHECK((kept - a * b.trace()).norm() < 1e-12);
    const Matrix m = random_matrix(16, 16, s);
    CHECK(std::abs(partial_trace(m, SubsystemDims::qubits(4), {1, 3}).trace() - m.trace()) < 1e-12);
  }
}

TEST_CASE("partial trace keeps factor order") {
  const Matrix a = random_matrix(2, 2, 1);
  const Matrix b = random_matrix(2, 2, 2);
  const Matrix c = random_matrix(2, 2, 3);
  const Matrix kept = partial_trace(kron({a, b, c}), SubsystemDims::qubits(3), {2, 0});
  CHECK((kept - kron(a, c) * b.trace()).norm() < 1e-12);
}

TEST_CASE("partial transpose") {
  const SubsystemDims two = SubsystemDims::qubits(2);
  const Matrix ra = testing::random_density(2, 4);
  const Matrix rb = testing::random_density(2, 5);
  const Matrix pt = partial_transpose(kron(ra, rb), two, {1});
  CHECK((pt - kron(ra, rb.transpose())).norm() < 1e-15);
  CHECK(min_eigenvalue(pt) > -1e-12);

  const Vector bell = (ops::ket("00") + ops::ket("11")) / std::sqrt(2.0);
  CHECK(min_eigenvalue(partial_transpose(bell * bell.adjoint(), two, {1})) ==
        doctest::Approx(-0.5).epsilon(1e-12));

  for (std::uint64_t s = 0; s < 5; ++s) {
    const Matrix m = random_matrix(16, 16, s);
    const SubsystemDims four = SubsystemDims::qubits(4);
    CHECK((partial_transpose(partial_transpose(m, four, {1, 3}), four, {1, 3}) - m).norm() < 1e-14);
    const Matrix h = random_hermitian(16, s);
    const Matrix hp = partial_transpose(h, four, {0, 2});
    CHECK(hermiticity_defect(hp) < 1e-14);
    CHECK(std::abs(hp.trace() - h.trace()) < 1e-12);
  }
}

TEST_CASE("dimension errors") {
  const Matrix m = Matrix::Identity(8, 8);
  CHECK_THROWS_AS(partial_trace(m, SubsystemDims::qubits(4), {0}), DimensionError);
  CHECK_THROWS_AS(partial_transpose(m, SubsystemDims::qubits(2), {0}), DimensionError);
  CHECK_THROWS_AS(partial_trace(m, SubsystemDims::qubits(3), {}), DimensionError);
  CHECK_THROWS_AS(partial_trace(m, SubsystemDims::qubits(3), {3}), DimensionError);
}

TEST_CASE("eig_hermitian") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  const auto e = eig_hermitian(d);
  CHECK(e.values(0) == doctest::Approx(1));
  CHECK(e.values(1) == doctest::Approx(2));
  CHECK(e.values(2) == doctest::Approx(3));

  const auto x = eig_hermitian(ops::pauli_x());
  CHECK(x.values(0) == doctest::Approx(-1));
  CHECK(x.values(1) == doctest::Approx(1));

  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix h = random_hermitian(16, s);
    const auto r = eig_hermitian(h);
    const Matrix back = r.vectors * r.values.cast<Complex>().asDiagonal() * r.vectors.adjoint();
    CHECK((back - h).norm() < 1e-10);
    CHECK((r.vectors.adjoint() * r.vectors - Matrix::Identity(16, 16)).norm() < 1e-10);
    for (int i = 1; i < 16; ++i) CHECK(r.values(i) >= r.values(i - 1));
  }

  CHECK_THROWS_AS(eig_hermitian(random_matrix(4, 4, 3)), ContractViolation);
}

TEST_CASE("PSD matrices have nonnegative spectrum") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix m = random_matrix(16, 5, s);
    CHECK(min_eigenvalue(m * m.adjoint()) >= -1e-10);
  }
}

TEST_CASE("haar_su2") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Matrix u = haar_su2(s);
    CHECK((u.adjoint() * u - ops::identity(2)).norm() < 1e-12);
    CHECK(std::abs(u.determinant() - Complex(1.0)) < 1e-12);
  }
  CHECK((haar_su2(9) - haar_su2(9)).norm() == 0.0);
  CHECK((haar_su2(9) - haar_su2(10)).norm() > 1e-3);
}

TEST_CASE("operator constants") {
  const Complex i(0, 1);
  CHECK(ops::pauli_y()(0, 1) == -i);
  CHECK(ops::pauli_y()(1, 0) == i);
  CHECK((ops::swap() * ops::ket("01") - ops::ket("10")).norm() == 0.0);
  CHECK(ops::ket("0110")(6) == Complex(1.0));
  CHECK_THROWS(ops::ket("012"));
}

}  // TEST_SUITE
