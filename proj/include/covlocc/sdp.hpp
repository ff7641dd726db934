#pragma once

// Small dense semidefinite programs over real coefficient vectors:
//
//   maximize    c . x
//   subject to  C_p + sum_k x_k A_pk  >= 0   for every pencil p
//               E x = b
//
// Solved by a log-barrier path-following method on the null space of the
// equality system.

#include <optional>
#include <string>
#include <vector>

#include "covlocc/linalg.hpp"

namespace covlocc {

struct PsdPencil {
  std::string name;
  Matrix constant;                   // Hermitian, n x n
  std::vector<Matrix> coefficients;  // one Hermitian n x n matrix per variable

  [[nodiscard]] Matrix evaluate(const RealVector& x) const;
};

struct SdpProblem {
  std::vector<std::string> labels;
  RealVector objective;
  std::vector<PsdPencil> pencils;
  RealMatrix equality_rows;  // may have zero rows
  RealVector equality_rhs;
  /// Optional hint; used only when it is strictly feasible.
  std::optional<RealVector> initial_point;

  [[nodiscard]] int variable_count() const { return static_cast<int>(objective.size()); }
  /// Throws DimensionError / ContractViolation on malformed problems.
  void validate() const;
};

enum class SdpStatus { kOptimal, kInfeasible, kMaxIterations };

const char* to_string(SdpStatus s);

struct SdpOptions {
  double gap_tolerance = 1e-7;
  /// Smallest barrier weight 1/t the path-following loop will reach.
  double barrier_floor = 1e-9;
  int max_iterations = 500;
};

struct SdpSolution {
  RealVector x;
  double objective = 0.0;
  double gap = 0.0;  // m / t at the last centering, m = total pencil order
  SdpStatus status = SdpStatus::kMaxIterations;
  int iterations = 0;     // Newton steps, both phases
  int equality_rank = 0;  // effective rank of the equality system
};

struct SdpResiduals {
  std::vector<double> pencil_min_eigenvalues;
  double equality_residual = 0.0;  // ||E x - b||_2
};

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {});

SdpResiduals residuals(const SdpProblem& problem, const RealVector& x);

/// JSON document consumed by external cross-check solvers. Matrices are
/// nested arrays of [re, im] pairs. Output is byte-stable.
std::string export_problem_json(const SdpProblem& problem, const std::string& id,
                                const std::string& meta_json = "{}");

/// Inverse of export_problem_json (meta and id are ignored).
SdpProblem import_problem_json(const std::string& text);

}  // namespace covlocc
