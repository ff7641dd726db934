#include "doctest.h"
#include "support.hpp"

#include "covlocc/irreps.hpp"

using namespace covlocc;

namespace {

double max_commutator(const Matrix& x, Scenario s, int samples, std::uint64_t seed) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Matrix g = group_element(s, haar_su2(seed + 2 * i), haar_su2(seed + 2 * i + 1));
    worst = std::max(worst, (x * g - g * x).norm());
  }
  return worst;
}

Vector from_kets(std::initializer_list<std::pair<double, const char*>> terms) {
  Vector v = Vector::Zero(16);
  for (const auto& [w, bits] : terms) v += w * ops::ket(bits);
  return v;
}

}  // namespace

TEST_SUITE("irreps") {

TEST_CASE("scenario tags round trip") {
  for (Scenario s : kAllScenarios) CHECK(parse_scenario(scenario_tag(s)) == s);
  CHECK(scenario_tag(Scenario::kFullIndependent) == "full-ind");
  CHECK_THROWS_AS(parse_scenario("semi"), std::invalid_argument);
}

TEST_CASE("two-qubit projectors") {
  const auto p = two_qubit_projectors();
  CHECK((p.symmetric + p.antisymmetric - ops::identity(4)).norm() < 1e-15);
  CHECK(p.symmetric.trace().real() == doctest::Approx(3));
  CHECK(p.antisymmetric.trace().real() == doctest::Approx(1));
  const Vector singlet = ops::ket("01") - ops::ket("10");
  CHECK((p.antisymmetric * singlet - singlet).norm() < 1e-15);
  CHECK((p.symmetric * ops::ket("00") - ops::ket("00")).norm() < 1e-15);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Matrix u = kron(haar_su2(s), haar_su2(s));
    CHECK((p.symmetric * u - u * p.symmetric).norm() < 1e-12);
  }
}

TEST_CASE("irrep basis layout and values") {
  const IrrepBasis b = standard_irrep_basis();
  REQUIRE(b.blocks.size() == 6);
  const int sizes[] = {1, 1, 3, 3, 3, 5};
  for (std::size_t i = 0; i < 6; ++i) CHECK(b.blocks[i].vectors.size() == static_cast<std::size_t>(sizes[i]));
  CHECK(b.multiplicity(0) == 2);
  CHECK(b.multiplicity(1) == 3);
  CHECK(b.multiplicity(2) == 1);

  const Vector d0 = from_kets({{0.5, "0101"}, {-0.5, "0110"}, {-0.5, "1001"}, {0.5, "1010"}});
  CHECK((b.block(0, 1).vectors[0] - d0).norm() < 1e-15);
  CHECK((b.block(2, 1).vectors.front() - ops::ket("0000")).norm() < 1e-15);
  CHECK((b.block(2, 1).vectors.back() - ops::ket("1111")).norm() < 1e-15);

  const Matrix cols = b.as_columns();
  CHECK(cols.cols() == 16);
  CHECK((cols.adjoint() * cols - Matrix::Identity(16, 16)).norm() < 1e-12);
}

TEST_CASE("irrep blocks are invariant under U x U x U x U") {
  const IrrepBasis b = standard_irrep_basis();
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Matrix u = haar_su2(s);
    const Matrix g = kron({u, u, u, u});
    for (const auto& blk : b.blocks) {
      Matrix proj = Matrix::Zero(16, 16);
      for (const Vector& v : blk.vectors) proj += v * v.adjoint();
      CHECK((proj * g - g * proj).norm() < 1e-12);
    }
  }
}

TEST_CASE("isomorphism operators") {
  const IrrepBasis b = standard_irrep_basis();
  for (int j = 0; j <= 2; ++j) {
    const int c = b.multiplicity(j);
    for (int k = 1; k <= c; ++k) {
      const Matrix pkk = isomorphism_operator(b, j, k, k);
      CHECK((pkk * pkk - pkk).norm() < 1e-12);
      CHECK(pkk.trace().real() == doctest::Approx(2 * j + 1));
      for (int l = 1; l <= c; ++l) {
        const Matrix pkl = isomorphism_operator(b, j, k, l);
        const Matrix plk = isomorphism_operator(b, j, l, k);
        CHECK((pkl * plk - pkk).norm() < 1e-12);
        CHECK((pkl.adjoint() - plk).norm() < 1e-15);
        for (std::uint64_t s = 0; s < 20; ++s) {
          const Matrix u = haar_su2(100 + s);
          const Matrix g = kron({u, u, u, u});
          CHECK((pkl * g - g * pkl).norm() < 1e-9);
        }
      }
    }
  }
  CHECK_THROWS_AS(isomorphism_operator(b, 2, 1, 2), std::out_of_range);
  CHECK_THROWS_AS(isomorphism_operator(b, 3, 1, 1), std::out_of_range);
}

TEST_CASE("similarity transforms map group elements to canonical form") {
  for (Scenario s : kAllScenarios) {
    const Matrix sim = scenario_similarity(s);
    CHECK((sim.adjoint() * sim - Matrix::Identity(16, 16)).norm() < 1e-14);
    for (std::uint64_t i = 0; i < 20; ++i) {
      const Matrix u1 = haar_su2(2 * i);
      const Matrix u2 = haar_su2(2 * i + 1);
      const Matrix mapped = sim * group_element(s, u1, u2) * sim.adjoint();
      CHECK((mapped - canonical_group_element(s, u1, u2)).norm() < 1e-12);
    }
  }
  const Matrix u = haar_su2(5);
  const Matrix id2 = ops::identity(2);
  CHECK((canonical_group_element(Scenario::kSemiCovariant, u, u) - kron({id2, id2, u, u})).norm() == 0.0);
  CHECK((group_element(Scenario::kProtocol, u, u) - kron({id2, u, u.conjugate(), id2})).norm() == 0.0);
}

TEST_CASE("ansatz sizes and labels") {
  CHECK(build_ansatz(Scenario::kSemiCovariant).parameter_count() == 32);
  CHECK(build_ansatz(Scenario::kFullSimultaneous).parameter_count() == 14);
  CHECK(build_ansatz(Scenario::kFullIndependent).parameter_count() == 4);
  CHECK(build_ansatz(Scenario::kProtocol).parameter_count() == 32);

  const CovariantAnsatz semi = build_ansatz(Scenario::kSemiCovariant);
  for (const char* label : {"s_11", "s_44", "s_7+", "s_7-", "a_11", "a_7+", "a_10-"}) {
    CHECK(semi.index_of(label) >= 0);
  }
  CHECK(semi.index_of("d_011") == -1);
  const CovariantAnsatz full = build_ansatz(Scenario::kFullSimultaneous);
  for (const char* label : {"d_011", "d_022", "d_012+", "d_012-", "d_123-", "d_211"}) {
    CHECK(full.index_of(label) >= 0);
  }
}

TEST_CASE("ansatz terms are Hermitian, covariant and independent") {
  for (Scenario s : kAllScenarios) {
    const CovariantAnsatz an = build_ansatz(s);
    const int n = an.parameter_count();
    Matrix vecs(256, n);
    for (int k = 0; k < n; ++k) {
      const Matrix& bk = an.terms[k].basis;
      CHECK(hermiticity_defect(bk) < 1e-12);
      CHECK(max_commutator(bk, s, 20, 11) < 1e-9);
      CHECK((an.similarity.adjoint() * an.terms[k].canonical * an.similarity - bk).norm() < 1e-12);
      vecs.col(k) = Eigen::Map<const Vector>(bk.data(), 256);
    }
    const RealMatrix gram = (vecs.adjoint() * vecs).real();
    const auto ev = Eigen::SelfAdjointEigenSolver<RealMatrix>(gram).eigenvalues();
    CHECK(ev.minCoeff() > 1e-3 * ev.maxCoeff());

    // Random real combinations stay Hermitian and covariant.
    RealVector x = RealVector::Zero(n);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int k = 0; k < n; ++k) x(k) = g(rng);
    const Matrix m = an.assemble(x);
    CHECK(hermiticity_defect(m) < 1e-12);
    CHECK(max_commutator(m, s, 20, 99) < 1e-9);
    CHECK((an.coordinates(m) - x).norm() < 1e-10);
  }
}

TEST_CASE("full-independent terms are orthogonal projectors summing to identity") {
  const CovariantAnsatz an = build_ansatz(Scenario::kFullIndependent);
  Matrix sum = Matrix::Zero(16, 16);
  for (int i = 0; i < 4; ++i) {
    const Matrix& p = an.terms[i].basis;
    sum += p;
    CHECK((p * p - p).norm() < 1e-12);
    for (int j = i + 1; j < 4; ++j) CHECK((p * an.terms[j].basis).norm() < 1e-12);
  }
  CHECK((sum - Matrix::Identity(16, 16)).norm() < 1e-12);
}

TEST_CASE("commutant dimension equals parameter count") {
  for (Scenario s : kAllScenarios) {
    CHECK(numerical_commutant_dimension(s, 30, 3) == build_ansatz(s).parameter_count());
  }
}

}  // TEST_SUITE
