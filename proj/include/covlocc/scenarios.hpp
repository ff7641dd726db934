#pragma once

// The four covariant-transformation problems: assembly of the SDP from the
// ansatz, closed-form fidelities, published Kraus families, covariance
// verification and grid sweeps.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "covlocc/channel.hpp"
#include "covlocc/irreps.hpp"
#include "covlocc/sdp.hpp"

namespace covlocc {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linear fidelity functional on the ansatz coefficients,
/// c_k = Tr[(rho_out (x) rho_in^T) B_k]. Protocol ignores `c` and uses the
/// input state as target.
RealVector objective_vector(const CovariantAnsatz& ansatz, double a, double c);
RealVector objective_vector(Scenario s, double a, double c);

struct EqualitySystem {
  RealMatrix rows;
  RealVector rhs;
};

/// Independent real rows of Tr_out(sum_k x_k B_k) = I_4.
EqualitySystem tp_constraint_rows(const CovariantAnsatz& ansatz);
EqualitySystem tp_constraint_rows(Scenario s);

/// Full SDP for one point; `ppt` adds the Bob-transposed pencil.
SdpProblem make_problem(const CovariantAnsatz& ansatz, double a, double c, bool ppt);

struct PointResult {
  double fidelity;
  ChoiMatrix choi;
  SdpSolution solution;
};

PointResult solve_point(const CovariantAnsatz& ansatz, double a, double c, bool ppt,
                        const SdpOptions& options = {});
PointResult solve_point(Scenario s, double a, double c, bool ppt, const SdpOptions& options = {});

/// Closed forms: semicovariant for a <= c only, both full scenarios
/// everywhere, protocol never.
std::optional<double> analytic_fidelity(Scenario s, double a, double c);

/// Nine-operator set for full-sim (uses d011 in [0, 1]) or for full-ind
/// (ignores d011).
KrausSet published_kraus(Scenario s, double d011 = 0.25);

struct ProtocolParams {
  double s11 = 0.0;
  double s44 = 0.0;
  double s7 = 0.0;  // Re s_41
  double a11 = 0.0;
  double a44 = 0.0;
  double a7 = 0.0;  // Re a_41
  double s22 = 0.0;
  double s33 = 0.0;
};

/// Coefficient values read from a semicovariant-type ansatz solution.
ProtocolParams protocol_params_from(const CovariantAnsatz& ansatz, const RealVector& x);

/// The fourteen-operator protocol family, built from the eigenpairs of the
/// 2x2 blocks [[s11, s7], [s7, s44]] and [[a11, a7], [a7, a44]].
/// Throws ParameterError when a block is not PSD.
KrausSet protocol_kraus(const ProtocolParams& params);

/// Printed closed forms of the block quantities, valid for s7, a7 != 0.
struct ProtocolClosedForm {
  double p1, p2, p3, p4;
  double d1, d2, d3, d4, d5, d6;
};
ProtocolClosedForm protocol_closed_form(const ProtocolParams& params);

struct CovarianceReport {
  double commutator_residual = 0.0;  // max_U ||[R, g(U)]||_F
  double fidelity_deviation = 0.0;   // max_U |F(rotated states) - F|
};

CovarianceReport verify_covariance(const ChoiMatrix& choi, Scenario s, int samples,
                                   std::uint64_t seed, double a = 0.6, double c = 0.8);

struct SurfacePoint {
  double a = 0.0;
  double c = 0.0;
  double fidelity = 0.0;         // with the requested ppt flag
  double fidelity_noppt = 0.0;   // without the PPT pencil
  std::optional<double> analytic;
  double gap = 0.0;
  bool identity_optimal = false;
  SdpStatus status = SdpStatus::kOptimal;
};

struct FidelitySurface {
  Scenario scenario;
  bool ppt = true;
  int grid_n = 0;
  std::vector<SurfacePoint> points;  // row-major in (a, c); protocol: one per a
};

/// Uniform grid over [0, 1] (both parameters, or a only for the protocol).
/// Points are solved on `jobs` worker threads (0 = hardware concurrency);
/// ordering does not depend on the thread count.
FidelitySurface grid_sweep(Scenario s, int grid_n, bool ppt, int jobs = 0,
                           const SdpOptions& options = {});

void write_csv(std::ostream& os, const FidelitySurface& surface);

struct IdentityRegion {
  int grid_n = 0;
  std::vector<double> values;     // grid coordinates
  std::vector<SurfacePoint> points;  // row-major, a outer
  [[nodiscard]] bool flagged(int ia, int ic) const {
    return points[static_cast<std::size_t>(ia * grid_n + ic)].identity_optimal;
  }
};

/// Semicovariant points where the identity channel attains the PPT optimum
/// (within 1e-6).
IdentityRegion identity_region(int grid_n, int jobs = 0, const SdpOptions& options = {});

struct FreeParameterInterval {
  double lower;
  double upper;
  double midpoint;
};

/// Range of d011 for which the published full-sim Kraus channel is PPT,
/// scanned on `samples` points (refined by bisection at the edges).
std::optional<FreeParameterInterval> d011_ppt_interval(int samples = 101);

/// Whether the identity channel lies in the scenario's covariant family.
bool identity_is_covariant(Scenario s);

}  // namespace covlocc
