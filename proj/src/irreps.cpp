#include "covlocc/irreps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace covlocc {

namespace {

const Matrix& id2() {
  static const Matrix m = ops::identity(2);
  return m;
}

// Unnormalized two-qubit vectors used by the irrep table.
struct Pair {
  Vector zz = ops::ket("00");
  Vector oo = ops::ket("11");
  Vector plus = ops::ket("01") + ops::ket("10");
  Vector minus = ops::ket("01") - ops::ket("10");
};

Vector kv(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

std::string pair_suffix(int k, int l) { return std::to_string(k) + std::to_string(l); }

// Two Hermitian generators from an off-diagonal pair of isomorphisms:
// Re part (P_kl + P_lk) and Im part i(P_kl - P_lk).
std::pair<Matrix, Matrix> hermitian_pair(const Matrix& p_kl) {
  const Complex i(0.0, 1.0);
  const Matrix p_lk = p_kl.adjoint();
  return {p_kl + p_lk, i * (p_kl - p_lk)};
}

std::vector<AnsatzTerm> multiplicity_space_terms(const Matrix& projector, char prefix) {
  // Copies are indexed by the first two qubits |00>, |01>, |10>, |11> -> 1..4.
  // Off-diagonal pairs are numbered 5..10 as (2,1), (3,1), (4,1), (3,2), (4,2), (4,3).
  std::vector<AnsatzTerm> terms;
  auto unit = [](int r, int c) {
    Matrix e = Matrix::Zero(4, 4);
    e(r, c) = 1.0;
    return e;
  };
  for (int k = 0; k < 4; ++k) {
    terms.push_back({std::string(1, prefix) + "_" + pair_suffix(k + 1, k + 1), Matrix(),
                     kron(unit(k, k), projector)});
  }
  int number = 5;
  for (int c = 0; c < 4; ++c) {
    for (int r = c + 1; r < 4; ++r, ++number) {
      auto [re, im] = hermitian_pair(kron(unit(r, c), projector));
      const std::string base = std::string(1, prefix) + "_" + std::to_string(number);
      terms.push_back({base + "+", Matrix(), std::move(re)});
      terms.push_back({base + "-", Matrix(), std::move(im)});
    }
  }
  return terms;
}

std::vector<AnsatzTerm> semicovariant_canonical_terms() {
  const auto proj = two_qubit_projectors();
  auto terms = multiplicity_space_terms(proj.symmetric, 's');
  auto anti = multiplicity_space_terms(proj.antisymmetric, 'a');
  terms.insert(terms.end(), anti.begin(), anti.end());
  return terms;
}

std::vector<AnsatzTerm> full_simultaneous_canonical_terms() {
  const IrrepBasis basis = standard_irrep_basis();
  std::vector<AnsatzTerm> terms;
  for (int j = 0; j <= 2; ++j) {
    const int mult = basis.multiplicity(j);
    for (int k = 1; k <= mult; ++k) {
      terms.push_back({"d_" + std::to_string(j) + pair_suffix(k, k), Matrix(),
                       isomorphism_operator(basis, j, k, k)});
    }
    for (int k = 1; k <= mult; ++k) {
      for (int l = k + 1; l <= mult; ++l) {
        auto [re, im] = hermitian_pair(isomorphism_operator(basis, j, k, l));
        const std::string base = "d_" + std::to_string(j) + pair_suffix(k, l);
        terms.push_back({base + "+", Matrix(), std::move(re)});
        terms.push_back({base + "-", Matrix(), std::move(im)});
      }
    }
  }
  return terms;
}

std::vector<AnsatzTerm> full_independent_canonical_terms() {
  const auto proj = two_qubit_projectors();
  const Matrix& pa = proj.antisymmetric;
  const Matrix& ps = proj.symmetric;
  return {{"p_1", Matrix(), kron(pa, pa)},
          {"p_2", Matrix(), kron(pa, ps)},
          {"p_3", Matrix(), kron(ps, pa)},
          {"p_4", Matrix(), kron(ps, ps)}};
}

}  // namespace

std::string_view scenario_tag(Scenario s) {
  switch (s) {
    case Scenario::kSemiCovariant:
      return "semicov";
    case Scenario::kFullSimultaneous:
      return "full-sim";
    case Scenario::kFullIndependent:
      return "full-ind";
    case Scenario::kProtocol:
      return "protocol";
  }
  throw std::invalid_argument("unknown scenario");
}

Scenario parse_scenario(std::string_view tag) {
  for (Scenario s : kAllScenarios) {
    if (scenario_tag(s) == tag) return s;
  }
  throw std::invalid_argument("unknown scenario tag '" + std::string(tag) + "'");
}

TwoQubitProjectors two_qubit_projectors() {
  const Vector psi_minus = (ops::ket("01") - ops::ket("10")) / std::sqrt(2.0);
  Matrix anti = psi_minus * psi_minus.adjoint();
  return {ops::identity(4) - anti, anti};
}

const IrrepBlock& IrrepBasis::block(int total_momentum, int copy) const {
  for (const auto& b : blocks) {
    if (b.total_momentum == total_momentum && b.copy == copy) return b;
  }
  throw std::out_of_range("no irrep block J=" + std::to_string(total_momentum) +
                          " copy " + std::to_string(copy));
}

int IrrepBasis::multiplicity(int total_momentum) const {
  int n = 0;
  for (const auto& b : blocks) n += (b.total_momentum == total_momentum) ? 1 : 0;
  return n;
}

Matrix IrrepBasis::as_columns() const {
  std::vector<const Vector*> cols;
  for (const auto& b : blocks) {
    for (const auto& v : b.vectors) cols.push_back(&v);
  }
  Matrix out(16, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = *cols[i];
  return out;
}

IrrepBasis standard_irrep_basis() {
  const Pair p;
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r3 = 1.0 / std::sqrt(3.0);
  const double r6 = 1.0 / std::sqrt(6.0);
  const Vector k0011 = ops::ket("0011");
  const Vector k1100 = ops::ket("1100");

  IrrepBasis basis;
  basis.blocks.push_back({0, 1, {0.5 * kv(p.minus, p.minus)}});
  basis.blocks.push_back({0, 2, {r3 * (k0011 - 0.5 * kv(p.plus, p.plus) + k1100)}});
  basis.blocks.push_back(
      {1, 1, {r2 * kv(p.minus, p.zz), 0.5 * kv(p.minus, p.plus), r2 * kv(p.minus, p.oo)}});
  basis.blocks.push_back(
      {1, 2, {r2 * kv(p.zz, p.minus), 0.5 * kv(p.plus, p.minus), r2 * kv(p.oo, p.minus)}});
  basis.blocks.push_back({1,
                          3,
                          {-0.5 * (kv(p.zz, p.plus) - kv(p.plus, p.zz)),
                           -r2 * (k0011 - k1100),
                           -0.5 * (kv(p.plus, p.oo) - kv(p.oo, p.plus))}});
  basis.blocks.push_back({2,
                          1,
                          {ops::ket("0000"),
                           0.5 * (kv(p.zz, p.plus) + kv(p.plus, p.zz)),
                           r6 * (k0011 + k1100 + kv(p.plus, p.plus)),
                           0.5 * (kv(p.plus, p.oo) + kv(p.oo, p.plus)),
                           ops::ket("1111")}});
  return basis;
}

Matrix isomorphism_operator(const IrrepBasis& basis, int total_momentum, int k, int l) {
  const IrrepBlock& to = basis.block(total_momentum, k);
  const IrrepBlock& from = basis.block(total_momentum, l);
  Matrix out = Matrix::Zero(16, 16);
  for (std::size_t m = 0; m < to.vectors.size(); ++m) out += to.vectors[m] * from.vectors[m].adjoint();
  return out;
}

Matrix group_element(Scenario s, const Matrix& u1, const Matrix& u2) {
  const Matrix c1 = u1.conjugate();
  switch (s) {
    case Scenario::kSemiCovariant:
      return kron({id2(), u1, id2(), c1});
    case Scenario::kFullSimultaneous:
      return kron({u1, u1, c1, c1});
    case Scenario::kFullIndependent:
      return kron({u1, u2, c1, u2.conjugate()});
    case Scenario::kProtocol:
      return kron({id2(), u1, c1, id2()});
  }
  throw std::invalid_argument("unknown scenario");
}

Matrix canonical_group_element(Scenario s, const Matrix& u1, const Matrix& u2) {
  switch (s) {
    case Scenario::kSemiCovariant:
    case Scenario::kProtocol:
      return kron({id2(), id2(), u1, u1});
    case Scenario::kFullSimultaneous:
      return kron({u1, u1, u1, u1});
    case Scenario::kFullIndependent:
      return kron({u1, u1, u2, u2});
  }
  throw std::invalid_argument("unknown scenario");
}

Matrix scenario_similarity(Scenario s) {
  const Matrix sy = ops::pauli_y();
  const Matrix sw = ops::swap();
  switch (s) {
    case Scenario::kSemiCovariant:
      return kron({id2(), sw, sy});
    case Scenario::kProtocol:
      return kron({id2(), sw, sy}) * kron({id2(), id2(), sw});
    case Scenario::kFullSimultaneous:
      return kron({id2(), id2(), sy, sy});
    case Scenario::kFullIndependent:
      return kron({id2(), sw, id2()}) * kron({id2(), id2(), sy, sy});
  }
  throw std::invalid_argument("unknown scenario");
}

int CovariantAnsatz::index_of(std::string_view label) const {
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (terms[k].label == label) return static_cast<int>(k);
  }
  return -1;
}

Matrix CovariantAnsatz::assemble(const RealVector& x) const {
  if (x.size() != parameter_count()) {
    throw DimensionError("assemble: expected " + std::to_string(parameter_count()) + " coefficients");
  }
  Matrix out = Matrix::Zero(16, 16);
  for (std::size_t k = 0; k < terms.size(); ++k) out += x(static_cast<Eigen::Index>(k)) * terms[k].basis;
  return out;
}

RealVector CovariantAnsatz::coordinates(const Matrix& m) const {
  const int n = parameter_count();
  RealMatrix gram(n, n);
  RealVector rhs(n);
  for (int k = 0; k < n; ++k) {
    rhs(k) = (terms[k].basis * m).trace().real();
    for (int l = 0; l < n; ++l) gram(k, l) = (terms[k].basis * terms[l].basis).trace().real();
  }
  return gram.ldlt().solve(rhs);
}

CovariantAnsatz build_ansatz(Scenario s) {
  CovariantAnsatz ansatz{s, scenario_similarity(s), {}};
  switch (s) {
    case Scenario::kSemiCovariant:
    case Scenario::kProtocol:
      ansatz.terms = semicovariant_canonical_terms();
      break;
    case Scenario::kFullSimultaneous:
      ansatz.terms = full_simultaneous_canonical_terms();
      break;
    case Scenario::kFullIndependent:
      ansatz.terms = full_independent_canonical_terms();
      break;
  }
  const Matrix& sim = ansatz.similarity;
  for (auto& t : ansatz.terms) t.basis = sim.adjoint() * t.canonical * sim;
  return ansatz;
}

int numerical_commutant_dimension(Scenario s, int samples, std::uint64_t seed) {
  // vec(Xg - gX) = (g^T (x) 1 - 1 (x) g) vec(X) in column-major vec.
  const Matrix id16 = ops::identity(16);
  Matrix normal = Matrix::Zero(256, 256);
  for (int i = 0; i < samples; ++i) {
    const Matrix u1 = haar_su2(seed + 2 * static_cast<std::uint64_t>(i));
    const Matrix u2 = haar_su2(seed + 2 * static_cast<std::uint64_t>(i) + 1);
    const Matrix g = group_element(s, u1, u2);
    const Matrix map = kron(g.transpose(), id16) - kron(id16, g);
    normal += map.adjoint() * map;
  }
  const auto eig = eig_hermitian(normal);
  const double tol = 1e-9 * std::max(1.0, eig.values.maxCoeff());
  int dim = 0;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) dim += (eig.values(k) < tol) ? 1 : 0;
  return dim;
}

}  // namespace covlocc
