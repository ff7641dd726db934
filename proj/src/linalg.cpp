#include "covlocc/linalg.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <random>

namespace covlocc {

namespace {

// Mixed-radix digits of a flat index, most significant factor first.
std::vector<int> digits_of(int index, const std::vector<int>& dims) {
  std::vector<int> out(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
  return out;
}

int index_of(const std::vector<int>& digits, const std::vector<int>& dims) {
  int idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

void check_factor_list(const std::vector<int>& factors, const SubsystemDims& dims) {
  for (int f : factors) {
    if (f < 0 || f >= dims.count()) {
      throw DimensionError("subsystem index " + std::to_string(f) + " out of range");
    }
  }
}

}  // namespace

SubsystemDims::SubsystemDims(std::initializer_list<int> dims) : SubsystemDims(std::vector<int>(dims)) {}

SubsystemDims::SubsystemDims(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionError("SubsystemDims needs at least one factor");
  for (int d : dims_) {
    if (d < 1) throw DimensionError("subsystem dimension must be positive");
  }
}

SubsystemDims SubsystemDims::qubits(int n) { return SubsystemDims(std::vector<int>(static_cast<std::size_t>(n), 2)); }

int SubsystemDims::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
}

void SubsystemDims::require_matches(const Matrix& m) const {
  if (m.rows() != m.cols() || m.rows() != total()) {
    throw DimensionError("matrix of shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         " does not match subsystem dimension " + std::to_string(total()));
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix kron(std::initializer_list<Matrix> factors) {
  if (factors.size() == 0) return Matrix::Identity(1, 1);
  auto it = factors.begin();
  Matrix out = *it;
  for (++it; it != factors.end(); ++it) out = kron(out, *it);
  return out;
}

Matrix partial_trace(const Matrix& m, const SubsystemDims& dims, const std::vector<int>& keep) {
  dims.require_matches(m);
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  check_factor_list(keep, dims);

  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  std::vector<int> traced;
  for (int f = 0; f < dims.count(); ++f) {
    if (!std::binary_search(kept.begin(), kept.end(), f)) traced.push_back(f);
  }

  std::vector<int> kept_dims;
  std::vector<int> traced_dims;
  for (int f : kept) kept_dims.push_back(dims[f]);
  for (int f : traced) traced_dims.push_back(dims[f]);
  const int nk = std::accumulate(kept_dims.begin(), kept_dims.end(), 1, std::multiplies<>());
  const int nt = std::accumulate(traced_dims.begin(), traced_dims.end(), 1, std::multiplies<>());

  Matrix out = Matrix::Zero(nk, nk);
  std::vector<int> full(static_cast<std::size_t>(dims.count()));
  auto flat = [&](const std::vector<int>& kd, const std::vector<int>& td) {
    for (std::size_t k = 0; k < kept.size(); ++k) full[kept[k]] = kd[k];
    for (std::size_t k = 0; k < traced.size(); ++k) full[traced[k]] = td[k];
    return index_of(full, dims.values());
  };
  for (int r = 0; r < nk; ++r) {
    const auto rd = digits_of(r, kept_dims);
    for (int c = 0; c < nk; ++c) {
      const auto cd = digits_of(c, kept_dims);
      Complex acc = 0.0;
      for (int t = 0; t < nt; ++t) {
        const auto td = digits_of(t, traced_dims);
        const int row = flat(rd, td);
        const int col = flat(cd, td);
        acc += m(row, col);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

Matrix partial_transpose(const Matrix& m, const SubsystemDims& dims,
                         const std::vector<int>& transposed) {
  dims.require_matches(m);
  check_factor_list(transposed, dims);
  std::vector<bool> flip(static_cast<std::size_t>(dims.count()), false);
  for (int f : transposed) flip[f] = true;

  const int n = dims.total();
  Matrix out(n, n);
  for (int r = 0; r < n; ++r) {
    const auto rd = digits_of(r, dims.values());
    for (int c = 0; c < n; ++c) {
      auto nr = rd;
      auto nc = digits_of(c, dims.values());
      for (int f = 0; f < dims.count(); ++f) {
        if (flip[f]) std::swap(nr[f], nc[f]);
      }
      out(index_of(nr, dims.values()), index_of(nc, dims.values())) = m(r, c);
    }
  }
  return out;
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianEigen eig_hermitian(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("eig_hermitian: matrix is not square");
  if (hermiticity_defect(m) > 1e-10) {
    throw ContractViolation("eig_hermitian: matrix is not Hermitian");
  }
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: no convergence");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix& m) {
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

Matrix haar_su2(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&] { return Complex(normal(gen), normal(gen)); };

  Vector c0(2);
  Vector c1(2);
  c0 << draw(), draw();
  c1 << draw(), draw();
  c0.normalize();
  c1 -= c0.dot(c1) * c0;  // dot() conjugates its first argument
  c1.normalize();

  Matrix u(2, 2);
  u.col(0) = c0;
  u.col(1) = c1;
  const Complex det = u.determinant();
  u.col(1) *= std::conj(det) / std::abs(det);
  return u;
}

namespace ops {

Matrix identity(int n) { return Matrix::Identity(n, n); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix pauli_y() {
  const Complex i(0.0, 1.0);
  Matrix m(2, 2);
  m << 0.0, -i, i, 0.0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Matrix swap() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 3) = 1.0;
  return m;
}

Vector ket(const std::string& bits) {
  if (bits.empty()) throw DimensionError("ket: empty bit string");
  int idx = 0;
  for (char b : bits) {
    if (b != '0' && b != '1') throw DimensionError("ket: bit string must contain only 0/1");
    idx = 2 * idx + (b - '0');
  }
  Vector v = Vector::Zero(Eigen::Index{1} << bits.size());
  v(idx) = 1.0;
  return v;
}

}  // namespace ops

}  // namespace covlocc
