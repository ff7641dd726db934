#include "doctest.h"
#include "support.hpp"

using namespace covlocc;
using covlocc::testing::random_density;
using covlocc::testing::random_kraus;

namespace {

ChoiMatrix swap_channel() { return choi_from_kraus({ops::swap()}); }

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("Schmidt states") {
  const SchmidtState s(0.6);
  CHECK(s.ket().norm() == doctest::Approx(1.0));
  CHECK(s.ket()(0).real() == doctest::Approx(0.6));
  CHECK(s.ket()(3).real() == doctest::Approx(0.8));
  CHECK(std::abs(s.density().trace() - Complex(1.0)) < 1e-15);
  CHECK_THROWS_AS(SchmidtState(1.2), ContractViolation);
  CHECK_THROWS_AS(SchmidtState(-0.1), ContractViolation);
}

TEST_CASE("plus operator") {
  const Matrix p2 = plus_operator(2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool one = (i == 0 || i == 3) && (j == 0 || j == 3);
      CHECK(p2(i, j) == Complex(one ? 1.0 : 0.0));
    }
  const Matrix p4 = plus_operator(4);
  CHECK(p4.trace().real() == doctest::Approx(4));
  const auto e = eig_hermitian(p4 / 4.0);
  CHECK(e.values(0) > -1e-14);
  CHECK(e.values(15) == doctest::Approx(1.0));
  CHECK(e.values(14) == doctest::Approx(0.0));
}

TEST_CASE("reference channels") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix rho = random_density(4, s);
    CHECK((apply_channel(ChoiMatrix::identity_channel(), rho) - rho).norm() < 1e-14);
    CHECK((apply_channel(ChoiMatrix::fully_depolarizing(), rho) - ops::identity(4) / 4.0).norm() <
          1e-14);
  }
  const Vector k01 = ops::ket("01");
  const Vector k10 = ops::ket("10");
  const Matrix out = apply_channel(swap_channel(), k01 * k01.adjoint());
  CHECK((out - k10 * k10.adjoint()).norm() < 1e-14);
}

TEST_CASE("strict mode reports non-unit output trace") {
  const ChoiMatrix twice(2.0 * plus_operator(4));
  const Matrix rho = random_density(4, 3);
  CHECK_NOTHROW(apply_channel(twice, rho));
  CHECK_THROWS_AS(apply_channel(twice, rho, true), ContractViolation);
  CHECK_NOTHROW(apply_channel(ChoiMatrix::identity_channel(), rho, true));
}

TEST_CASE("Choi matrix validation") {
  CHECK_THROWS_AS(ChoiMatrix(Matrix::Identity(4, 4)), DimensionError);
  CHECK_THROWS_AS(ChoiMatrix(testing::random_matrix(16, 16, 1)), ContractViolation);
}

TEST_CASE("choi_from_kraus") {
  const Matrix u = kron(haar_su2(1), haar_su2(2));
  const ChoiMatrix r = choi_from_kraus({u});
  CHECK(r.matrix().trace().real() == doctest::Approx(4.0));
  const auto e = eig_hermitian(r.matrix());
  CHECK(e.values(14) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((choi_from_kraus({ops::identity(4)}).matrix() - plus_operator(4)).norm() < 1e-15);
}

TEST_CASE("Choi and Kraus actions agree") {
  for (int count : {1, 2, 3, 5}) {
    const KrausSet k = random_kraus(count, 40 + count);
    CHECK(kraus_tp_residual(k) < 1e-12);
    const ChoiMatrix r = choi_from_kraus(k);
    CHECK(check_tp(r) < 1e-12);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Matrix rho = random_density(4, 1000 + s);
      const Matrix out = apply_channel(r, rho);
      CHECK((out - apply_channel(k, rho)).norm() < 1e-12);
      CHECK(std::abs(out.trace() - Complex(1.0)) < 1e-12);
      CHECK(min_eigenvalue(out) > -1e-12);
    }
  }
}

TEST_CASE("kraus_from_choi") {
  const KrausSet id = kraus_from_choi(ChoiMatrix::identity_channel());
  REQUIRE(id.size() == 1);
  const Complex phase = id[0](0, 0);
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
  CHECK((id[0] / phase - ops::identity(4)).norm() < 1e-12);

  for (int count : {2, 3, 4}) {
    const KrausSet k = random_kraus(count, 70 + count);
    const ChoiMatrix r = choi_from_kraus(k);
    const KrausSet back = kraus_from_choi(r);
    CHECK(back.size() == static_cast<std::size_t>(count));
    CHECK((choi_from_kraus(back).matrix() - r.matrix()).norm() < 1e-9);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Matrix rho = random_density(4, 2000 + s);
      CHECK((apply_channel(back, rho) - apply_channel(k, rho)).norm() < 1e-9);
    }
  }

  Matrix bad = plus_operator(4);
  bad -= 0.1 * Matrix::Identity(16, 16);
  CHECK_THROWS_AS(kraus_from_choi(ChoiMatrix(bad)), NotCompletelyPositive);
}

TEST_CASE("TP residual") {
  CHECK(check_tp(ChoiMatrix::identity_channel()) < 1e-14);
  CHECK(check_tp(ChoiMatrix(2.0 * plus_operator(4))) == doctest::Approx(2.0));  // Frobenius norm of I_4
  // TP residual small iff all outputs have unit trace.
  const KrausSet k = random_kraus(2, 5);
  KrausSet scaled = k;
  scaled[0] *= 1.1;
  const ChoiMatrix r = choi_from_kraus(scaled);
  CHECK(check_tp(r) > 1e-3);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s)
    worst = std::max(worst, std::abs(apply_channel(r, random_density(4, s)).trace().real() - 1.0));
  CHECK(worst > 1e-8);
}

TEST_CASE("PPT across Alice | Bob") {
  CHECK(check_ppt(ChoiMatrix::identity_channel()) >= -1e-14);
  CHECK(check_ppt(ChoiMatrix::fully_depolarizing()) >= 0.0);
  CHECK(check_ppt(swap_channel()) < -0.5);
  // Local unitaries stay PPT.
  CHECK(check_ppt(choi_from_kraus({kron(haar_su2(3), haar_su2(4))})) > -1e-12);
  CHECK(check_cp(ChoiMatrix::identity_channel()) > -1e-14);
}

TEST_CASE("channel fidelity") {
  CHECK(channel_fidelity(ChoiMatrix::identity_channel(), SchmidtState(0.3), SchmidtState(0.3)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(channel_fidelity(ChoiMatrix::identity_channel(), SchmidtState(0.6), SchmidtState(0.8)) ==
        doctest::Approx(0.9216).epsilon(1e-14));
  CHECK(channel_fidelity(ChoiMatrix::fully_depolarizing(), SchmidtState(0.2), SchmidtState(0.9)) ==
        doctest::Approx(0.25));
  const Matrix rho = random_density(4, 11);
  CHECK(channel_fidelity(ChoiMatrix::fully_depolarizing(), rho, SchmidtState(0.4)) ==
        doctest::Approx(0.25));
}

TEST_CASE("fidelity is linear in the Choi matrix and bounded") {
  const Matrix r1 = choi_from_kraus(random_kraus(2, 1)).matrix();
  const Matrix r2 = choi_from_kraus(random_kraus(3, 2)).matrix();
  const Matrix in = SchmidtState(0.35).density();
  const Matrix out = SchmidtState(0.75).density();
  const double lhs = fidelity_functional(0.3 * r1 + 1.7 * r2, in, out);
  const double rhs = 0.3 * fidelity_functional(r1, in, out) + 1.7 * fidelity_functional(r2, in, out);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ChoiMatrix r = choi_from_kraus(random_kraus(1 + static_cast<int>(s % 4), 300 + s));
    const double f = channel_fidelity(r, SchmidtState(0.1 * static_cast<double>(s % 10)),
                                      SchmidtState(0.05 * static_cast<double>(s)));
    CHECK(f >= -1e-12);
    CHECK(f <= 1.0 + 1e-9);
  }
}

}  // TEST_SUITE
