#include "covlocc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace covlocc {

namespace {

constexpr int kDim = 4;
constexpr int kChoiDim = kDim * kDim;

const SubsystemDims& choi_dims() {
  static const SubsystemDims dims = SubsystemDims::qubits(4);
  return dims;
}

void require_4x4(const Matrix& m, const char* what) {
  if (m.rows() != kDim || m.cols() != kDim) {
    throw DimensionError(std::string(what) + ": expected a 4x4 matrix");
  }
}

}  // namespace

SchmidtState::SchmidtState(double schmidt) : schmidt_(schmidt) {
  if (!(schmidt >= 0.0 && schmidt <= 1.0)) {
    throw ContractViolation("Schmidt parameter must lie in [0, 1], got " + std::to_string(schmidt));
  }
}

Vector SchmidtState::ket() const {
  Vector v = Vector::Zero(kDim);
  v(0) = schmidt_;
  v(3) = std::sqrt(std::max(0.0, 1.0 - schmidt_ * schmidt_));
  return v;
}

Matrix SchmidtState::density() const {
  const Vector v = ket();
  return v * v.adjoint();
}

Matrix density_of(const StateInput& state) {
  if (const auto* s = std::get_if<SchmidtState>(&state)) return s->density();
  const Matrix& m = std::get<Matrix>(state);
  require_4x4(m, "density_of");
  return m;
}

ChoiMatrix::ChoiMatrix(Matrix m) : m_(std::move(m)) {
  choi_dims().require_matches(m_);
  if (hermiticity_defect(m_) > 1e-10) throw ContractViolation("Choi matrix is not Hermitian");
}

ChoiMatrix ChoiMatrix::identity_channel() { return ChoiMatrix(plus_operator(kDim)); }

ChoiMatrix ChoiMatrix::fully_depolarizing() {
  return ChoiMatrix(Matrix::Identity(kChoiDim, kChoiDim) / static_cast<double>(kDim));
}

Matrix plus_operator(int d) {
  if (d < 2) throw DimensionError("plus_operator: d must be at least 2");
  Matrix p = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) p(i * d + i, j * d + j) = 1.0;
  }
  return p;
}

Matrix apply_channel(const ChoiMatrix& choi, const Matrix& rho_in, bool strict) {
  require_4x4(rho_in, "apply");
  const Matrix& r = choi.matrix();
  Matrix out = Matrix::Zero(kDim, kDim);
  for (int o = 0; o < kDim; ++o) {
    for (int op = 0; op < kDim; ++op) {
      Complex acc = 0.0;
      for (int i = 0; i < kDim; ++i) {
        for (int j = 0; j < kDim; ++j) acc += rho_in(j, i) * r(o * kDim + j, op * kDim + i);
      }
      out(o, op) = acc;
    }
  }
  if (strict) {
    const double tr_in = rho_in.trace().real();
    if (std::abs(out.trace().real() - tr_in) > 1e-8) {
      throw ContractViolation("apply: channel is not trace preserving");
    }
  }
  return out;
}

Matrix apply_channel(const KrausSet& kraus, const Matrix& rho_in) {
  require_4x4(rho_in, "apply");
  Matrix out = Matrix::Zero(kDim, kDim);
  for (const auto& a : kraus) out += a * rho_in * a.adjoint();
  return out;
}

ChoiMatrix choi_from_kraus(const KrausSet& kraus) {
  Matrix r = Matrix::Zero(kChoiDim, kChoiDim);
  for (const auto& a : kraus) {
    require_4x4(a, "choi_from_kraus");
    // (A (x) 1) sum_i |ii> has entry A(o, i) at flat index (o, i).
    Vector v(kChoiDim);
    for (int o = 0; o < kDim; ++o) {
      for (int i = 0; i < kDim; ++i) v(o * kDim + i) = a(o, i);
    }
    r += v * v.adjoint();
  }
  return ChoiMatrix(std::move(r));
}

KrausSet kraus_from_choi(const ChoiMatrix& choi) {
  const auto eig = eig_hermitian(choi.matrix());
  if (eig.values(0) < -1e-8) {
    throw NotCompletelyPositive("kraus_from_choi: Choi matrix has eigenvalue " +
                                std::to_string(eig.values(0)));
  }
  const double cutoff = 1e-10 * std::max(eig.values.maxCoeff(), 0.0);
  KrausSet out;
  for (Eigen::Index k = eig.values.size() - 1; k >= 0; --k) {
    const double lambda = eig.values(k);
    if (lambda <= cutoff) continue;
    Matrix a(kDim, kDim);
    for (int o = 0; o < kDim; ++o) {
      for (int i = 0; i < kDim; ++i) a(o, i) = std::sqrt(lambda) * eig.vectors(o * kDim + i, k);
    }
    out.push_back(std::move(a));
  }
  return out;
}

double check_tp(const ChoiMatrix& choi) {
  const Matrix reduced =
      partial_trace(choi.matrix(), choi_dims(), {factor::kAliceIn, factor::kBobIn});
  return (reduced - Matrix::Identity(kDim, kDim)).norm();
}

double kraus_tp_residual(const KrausSet& kraus) {
  Matrix sum = Matrix::Zero(kDim, kDim);
  for (const auto& a : kraus) sum += a.adjoint() * a;
  return (sum - Matrix::Identity(kDim, kDim)).norm();
}

double check_ppt(const ChoiMatrix& choi) {
  return min_eigenvalue(
      partial_transpose(choi.matrix(), choi_dims(), {factor::kBobOut, factor::kBobIn}));
}

double check_cp(const ChoiMatrix& choi) { return min_eigenvalue(choi.matrix()); }

double fidelity_functional(const Matrix& r, const Matrix& rho_in, const Matrix& rho_out) {
  return (kron(rho_out, rho_in.transpose()) * r).trace().real();
}

double channel_fidelity(const ChoiMatrix& choi, const StateInput& input, const StateInput& target) {
  return fidelity_functional(choi.matrix(), density_of(input), density_of(target));
}

}  // namespace covlocc
