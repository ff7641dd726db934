#include "covlocc/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace covlocc {

namespace {

using json = nlohmann::json;

// Problem restricted to the affine set {x0 + N z}: every pencil becomes
// F_p(z) = base_p + sum_j z_j gen_pj, the objective value c0 + cz . z.
struct ReducedProblem {
  std::vector<Matrix> base;
  std::vector<std::vector<Matrix>> generators;
  RealVector objective;
  double objective_offset = 0.0;

  [[nodiscard]] int dim() const { return static_cast<int>(objective.size()); }

  [[nodiscard]] Matrix pencil(std::size_t p, const RealVector& z) const {
    Matrix f = base[p];
    for (int j = 0; j < dim(); ++j) f += z(j) * generators[p][j];
    return f;
  }

  [[nodiscard]] int order() const {
    int m = 0;
    for (const auto& b : base) m += static_cast<int>(b.rows());
    return m;
  }
};

// Cholesky of a Hermitian matrix; nullopt unless positive definite.
std::optional<Eigen::LLT<Matrix>> cholesky(const Matrix& f) {
  Eigen::LLT<Matrix> llt(0.5 * (f + f.adjoint()));
  if (llt.info() != Eigen::Success) return std::nullopt;
  const auto diag = llt.matrixL().toDenseMatrix().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i).real() > 0.0) || !std::isfinite(diag(i).real())) return std::nullopt;
  }
  return llt;
}

double min_eig_over(const ReducedProblem& rp, const RealVector& z) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < rp.base.size(); ++p) lo = std::min(lo, min_eigenvalue(rp.pencil(p, z)));
  return lo;
}

bool strictly_feasible(const ReducedProblem& rp, const RealVector& z) {
  for (std::size_t p = 0; p < rp.base.size(); ++p) {
    if (!cholesky(rp.pencil(p, z))) return false;
  }
  return true;
}

// -t c.z - sum_p log det F_p(z), or nullopt outside the interior.
std::optional<double> barrier_value(const ReducedProblem& rp, const RealVector& z, double t) {
  double v = -t * rp.objective.dot(z);
  for (std::size_t p = 0; p < rp.base.size(); ++p) {
    const auto llt = cholesky(rp.pencil(p, z));
    if (!llt) return std::nullopt;
    v -= 2.0 * llt->matrixLLT().diagonal().real().array().log().sum();
  }
  return v;
}

struct NewtonSystem {
  RealVector gradient;
  RealMatrix hessian;
};

// Gradient and Hessian of  -t c.z - sum_p log det F_p(z).
// With F = L L^H and W_j = L^{-1} G_j L^{-H}:
//   d/dz_j log det F = tr W_j,   d2/dz_i dz_j = -tr(W_i W_j).
NewtonSystem newton_system(const ReducedProblem& rp, const RealVector& z, double t) {
  const int n = rp.dim();
  NewtonSystem sys{-t * rp.objective, RealMatrix::Zero(n, n)};
  for (std::size_t p = 0; p < rp.base.size(); ++p) {
    const Matrix f = rp.pencil(p, z);
    Eigen::LLT<Matrix> llt(0.5 * (f + f.adjoint()));
    const auto lower = llt.matrixL();
    const Eigen::Index m = f.rows();
    Matrix w_cols(m * m, n);
    for (int j = 0; j < n; ++j) {
      Matrix w = lower.solve(rp.generators[p][j]);
      w = lower.solve(w.adjoint().eval());  // L^{-1} (L^{-1} G)^H = L^{-1} G L^{-H}
      sys.gradient(j) -= w.trace().real();
      w_cols.col(j) = Eigen::Map<const Vector>(w.data(), m * m);
    }
    sys.hessian += (w_cols.adjoint() * w_cols).real();
  }
  return sys;
}

struct CenteringResult {
  RealVector z;
  int steps = 0;
  bool stalled = false;
  bool stopped_early = false;
};

// Damped Newton centering for a fixed t. `early_stop` ends the loop as soon
// as it returns true for an iterate.
template <typename EarlyStop>
CenteringResult center(const ReducedProblem& rp, RealVector z, double t, int budget,
                       EarlyStop&& early_stop) {
  CenteringResult res{std::move(z)};
  constexpr double kDecrementTol = 1e-9;
  while (res.steps < budget) {
    const auto sys = newton_system(rp, res.z, t);
    RealMatrix h = sys.hessian;
    const double ridge = 1e-14 * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
    h.diagonal().array() += ridge;
    const RealVector step = -h.ldlt().solve(sys.gradient);
    const double decrement_sq = std::max(0.0, -sys.gradient.dot(step));
    if (!step.allFinite()) {
      res.stalled = true;
      break;
    }
    if (0.5 * decrement_sq <= kDecrementTol) break;

    // Full steps inside the quadratic region; elsewhere Armijo backtracking
    // on the barrier value.
    const double decrement = std::sqrt(decrement_sq);
    const auto current = barrier_value(rp, res.z, t);
    double alpha = 1.0;
    RealVector trial = res.z + step;
    while (alpha > 1e-14) {
      const auto value = barrier_value(rp, trial, t);
      if (value && (decrement < 0.25 || !current ||
                    *value <= *current - 0.25 * alpha * decrement_sq)) {
        break;
      }
      alpha *= 0.5;
      trial = res.z + alpha * step;
    }
    ++res.steps;
    if (alpha <= 1e-14) {
      res.stalled = true;
      break;
    }
    res.z = std::move(trial);
    if (early_stop(res.z)) {
      res.stopped_early = true;
      break;
    }
  }
  return res;
}

struct PathResult {
  RealVector z;
  double gap = std::numeric_limits<double>::infinity();
  int steps = 0;
  bool converged = false;
  bool stopped_early = false;
};

template <typename EarlyStop>
PathResult follow_path(const ReducedProblem& rp, RealVector z, const SdpOptions& opt, int budget,
                       EarlyStop&& early_stop) {
  constexpr double kGrowth = 20.0;
  const double m = rp.order();
  PathResult out{std::move(z)};
  double t = 1.0;
  while (true) {
    auto c = center(rp, out.z, t, budget - out.steps, early_stop);
    out.steps += c.steps;
    out.z = std::move(c.z);
    if (c.stopped_early) {
      out.stopped_early = true;
      return out;
    }
    out.gap = m / t;
    const bool at_floor = 1.0 / t <= opt.barrier_floor * (1.0 + 1e-12);
    if (out.gap <= 0.1 * opt.gap_tolerance || at_floor) {
      out.converged = out.gap <= opt.gap_tolerance;
      return out;
    }
    if (out.steps >= budget) return out;
    t = std::min(t * kGrowth, 1.0 / opt.barrier_floor);
  }
}

// Find z with every pencil positive definite, or nullopt when the interior is
// empty. Minimizes s subject to F_p(z) + s I >= 0 and stops once s < 0.
std::optional<RealVector> phase_one(const ReducedProblem& rp, const SdpOptions& opt, int& steps) {
  const int n = rp.dim();
  RealVector z0 = RealVector::Zero(n);
  if (strictly_feasible(rp, z0)) return z0;

  ReducedProblem aux;
  aux.base = rp.base;
  aux.generators = rp.generators;
  for (std::size_t p = 0; p < rp.base.size(); ++p) {
    aux.generators[p].push_back(Matrix::Identity(rp.base[p].rows(), rp.base[p].cols()));
  }
  aux.objective = RealVector::Zero(n + 1);
  aux.objective(n) = -1.0;

  RealVector w(n + 1);
  w.head(n) = z0;
  w(n) = 1.0 - min_eig_over(rp, z0);

  auto done = [&](const RealVector& v) { return v(n) < 0.0 && strictly_feasible(rp, v.head(n)); };
  SdpOptions aux_opt = opt;
  aux_opt.gap_tolerance = 1e-9;
  const auto path = follow_path(aux, w, aux_opt, opt.max_iterations, done);
  steps += path.steps;
  if (path.stopped_early) return RealVector(path.z.head(n));
  return std::nullopt;
}

// Index groups that no pencil matrix couples: connected components of the
// union of the sparsity patterns. The pencil is PSD iff every block is.
std::vector<std::vector<int>> diagonal_blocks(const PsdPencil& p) {
  const int n = static_cast<int>(p.constant.rows());
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  auto link = [&](const Matrix& m) {
    for (int r = 0; r < n; ++r) {
      for (int c = r + 1; c < n; ++c) {
        if (m(r, c) != Complex(0.0) || m(c, r) != Complex(0.0)) parent[static_cast<std::size_t>(find(r))] = find(c);
      }
    }
  };
  link(p.constant);
  for (const auto& a : p.coefficients) link(a);
  std::vector<std::vector<int>> blocks;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (slot[static_cast<std::size_t>(root)] < 0) {
      slot[static_cast<std::size_t>(root)] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(slot[static_cast<std::size_t>(root)])].push_back(i);
  }
  return blocks;
}

Matrix restrict_to(const Matrix& m, const std::vector<int>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix out(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) out(r, c) = m(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
  }
  return out;
}

json complex_matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix complex_matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw DimensionError("ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row.at(static_cast<std::size_t>(c));
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace

Matrix PsdPencil::evaluate(const RealVector& x) const {
  Matrix f = constant;
  for (std::size_t k = 0; k < coefficients.size(); ++k) f += x(static_cast<Eigen::Index>(k)) * coefficients[k];
  return f;
}

void SdpProblem::validate() const {
  const int n = variable_count();
  if (!labels.empty() && static_cast<int>(labels.size()) != n) {
    throw DimensionError("SdpProblem: label count does not match variable count");
  }
  if (pencils.empty()) throw ContractViolation("SdpProblem: at least one PSD pencil is required");
  for (const auto& p : pencils) {
    if (static_cast<int>(p.coefficients.size()) != n) {
      throw DimensionError("SdpProblem: pencil '" + p.name + "' has wrong coefficient count");
    }
    if (p.constant.rows() != p.constant.cols()) throw DimensionError("SdpProblem: pencil not square");
    if (hermiticity_defect(p.constant) > 1e-12) {
      throw ContractViolation("SdpProblem: pencil '" + p.name + "' constant is not Hermitian");
    }
    for (const auto& a : p.coefficients) {
      if (a.rows() != p.constant.rows() || a.cols() != p.constant.cols()) {
        throw DimensionError("SdpProblem: pencil '" + p.name + "' has inconsistent shapes");
      }
      if (hermiticity_defect(a) > 1e-12) {
        throw ContractViolation("SdpProblem: pencil '" + p.name + "' coefficient is not Hermitian");
      }
    }
  }
  if (equality_rows.rows() > 0 && equality_rows.cols() != n) {
    throw DimensionError("SdpProblem: equality rows have wrong width");
  }
  if (equality_rows.rows() != equality_rhs.size()) {
    throw DimensionError("SdpProblem: equality rhs length mismatch");
  }
}

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal:
      return "optimal";
    case SdpStatus::kInfeasible:
      return "infeasible";
    case SdpStatus::kMaxIterations:
      return "max-iterations";
  }
  return "unknown";
}

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options) {
  problem.validate();
  const int n = problem.variable_count();
  SdpSolution sol;

  // Affine parameterization x = x0 + N z of the equality system.
  RealVector x0 = RealVector::Zero(n);
  RealMatrix null_basis = RealMatrix::Identity(n, n);
  if (problem.equality_rows.rows() > 0) {
    Eigen::JacobiSVD<RealMatrix> svd(problem.equality_rows, Eigen::ComputeFullV | Eigen::ComputeThinU);
    const RealVector& sv = svd.singularValues();
    const double tol = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > tol ? 1 : 0;
    sol.equality_rank = rank;
    svd.setThreshold(tol / std::max(1.0, sv.size() > 0 ? sv(0) : 1.0));
    x0 = svd.solve(problem.equality_rhs);
    const double eq_res = (problem.equality_rows * x0 - problem.equality_rhs).norm();
    if (eq_res > 1e-8 * std::max(1.0, problem.equality_rhs.norm())) {
      sol.status = SdpStatus::kInfeasible;
      sol.x = x0;
      sol.objective = problem.objective.dot(x0);
      sol.gap = std::numeric_limits<double>::infinity();
      return sol;
    }
    null_basis = svd.matrixV().rightCols(n - rank);
  }

  ReducedProblem rp;
  rp.objective = null_basis.transpose() * problem.objective;
  rp.objective_offset = problem.objective.dot(x0);
  for (const auto& p : problem.pencils) {
    const Matrix base = p.evaluate(x0);
    std::vector<Matrix> gens;
    for (Eigen::Index j = 0; j < null_basis.cols(); ++j) {
      Matrix g = Matrix::Zero(p.constant.rows(), p.constant.cols());
      for (int k = 0; k < n; ++k) {
        if (null_basis(k, j) != 0.0) g += null_basis(k, j) * p.coefficients[k];
      }
      gens.push_back(std::move(g));
    }
    for (const auto& block : diagonal_blocks(p)) {
      rp.base.push_back(restrict_to(base, block));
      std::vector<Matrix> block_gens;
      for (const auto& g : gens) block_gens.push_back(restrict_to(g, block));
      rp.generators.push_back(std::move(block_gens));
    }
  }

  auto finish = [&](const RealVector& z, double gap, SdpStatus status) {
    sol.x = x0 + null_basis * z;
    sol.objective = problem.objective.dot(sol.x);
    sol.gap = gap;
    sol.status = status;
    return sol;
  };

  std::optional<RealVector> start;
  if (problem.initial_point && problem.initial_point->size() == n) {
    RealVector z = null_basis.transpose() * (*problem.initial_point - x0);
    if (strictly_feasible(rp, z)) start = std::move(z);
  }
  if (!start) start = phase_one(rp, options, sol.iterations);
  if (!start) return finish(RealVector::Zero(rp.dim()), std::numeric_limits<double>::infinity(),
                            SdpStatus::kInfeasible);

  if (rp.dim() == 0) {
    return finish(*start, 0.0, SdpStatus::kOptimal);
  }

  const int budget = std::max(0, options.max_iterations - sol.iterations);
  auto never = [](const RealVector&) { return false; };
  const auto path = follow_path(rp, *start, options, budget, never);
  sol.iterations += path.steps;
  return finish(path.z, path.gap, path.converged ? SdpStatus::kOptimal : SdpStatus::kMaxIterations);
}

SdpResiduals residuals(const SdpProblem& problem, const RealVector& x) {
  SdpResiduals out;
  for (const auto& p : problem.pencils) out.pencil_min_eigenvalues.push_back(min_eigenvalue(p.evaluate(x)));
  if (problem.equality_rows.rows() > 0) {
    out.equality_residual = (problem.equality_rows * x - problem.equality_rhs).norm();
  }
  return out;
}

std::string export_problem_json(const SdpProblem& problem, const std::string& id,
                                const std::string& meta_json) {
  json doc;
  doc["format"] = "covlocc-sdp/1";
  doc["id"] = id;
  doc["sense"] = "maximize";
  doc["meta"] = json::parse(meta_json);
  doc["labels"] = problem.labels;
  doc["objective"] = std::vector<double>(problem.objective.data(),
                                         problem.objective.data() + problem.objective.size());
  json pencils = json::array();
  for (const auto& p : problem.pencils) {
    json coeffs = json::array();
    for (const auto& a : p.coefficients) coeffs.push_back(complex_matrix_json(a));
    pencils.push_back({{"name", p.name}, {"constant", complex_matrix_json(p.constant)}, {"coefficients", coeffs}});
  }
  doc["pencils"] = std::move(pencils);
  json rows = json::array();
  for (Eigen::Index r = 0; r < problem.equality_rows.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < problem.equality_rows.cols(); ++c) row.push_back(problem.equality_rows(r, c));
    rows.push_back(std::move(row));
  }
  doc["equalities"] = {{"rows", rows},
                       {"rhs", std::vector<double>(problem.equality_rhs.data(),
                                                   problem.equality_rhs.data() + problem.equality_rhs.size())}};
  doc["expected_fidelity"] = nullptr;
  return doc.dump() + "\n";
}

SdpProblem import_problem_json(const std::string& text) {
  const json doc = json::parse(text);
  SdpProblem p;
  p.labels = doc.at("labels").get<std::vector<std::string>>();
  const auto obj = doc.at("objective").get<std::vector<double>>();
  p.objective = Eigen::Map<const RealVector>(obj.data(), static_cast<Eigen::Index>(obj.size()));
  for (const auto& pj : doc.at("pencils")) {
    PsdPencil pencil;
    pencil.name = pj.at("name").get<std::string>();
    pencil.constant = complex_matrix_from_json(pj.at("constant"));
    for (const auto& a : pj.at("coefficients")) pencil.coefficients.push_back(complex_matrix_from_json(a));
    p.pencils.push_back(std::move(pencil));
  }
  const auto& eq = doc.at("equalities");
  const auto& rows = eq.at("rows");
  const auto rhs = eq.at("rhs").get<std::vector<double>>();
  p.equality_rows = RealMatrix::Zero(static_cast<Eigen::Index>(rows.size()), p.variable_count());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto row = rows[r].get<std::vector<double>>();
    if (static_cast<int>(row.size()) != p.variable_count()) throw DimensionError("equality row width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) {
      p.equality_rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  p.equality_rhs = Eigen::Map<const RealVector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  p.validate();
  return p;
}

}  // namespace covlocc
