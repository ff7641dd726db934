#include "covlocc/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

namespace covlocc {

namespace {

const SubsystemDims& four_qubits() {
  static const SubsystemDims dims = SubsystemDims::qubits(4);
  return dims;
}

const CovariantAnsatz& cached_ansatz(Scenario s) {
  static const CovariantAnsatz semicov = build_ansatz(Scenario::kSemiCovariant);
  static const CovariantAnsatz full_sim = build_ansatz(Scenario::kFullSimultaneous);
  static const CovariantAnsatz full_ind = build_ansatz(Scenario::kFullIndependent);
  static const CovariantAnsatz protocol = build_ansatz(Scenario::kProtocol);
  switch (s) {
    case Scenario::kSemiCovariant:
      return semicov;
    case Scenario::kFullSimultaneous:
      return full_sim;
    case Scenario::kFullIndependent:
      return full_ind;
    case Scenario::kProtocol:
      return protocol;
  }
  throw std::invalid_argument("unknown scenario");
}

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ParameterError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

double overlap_squared(double a, double c) {
  const double x = a * c + std::sqrt(std::max(0.0, (1.0 - a * a) * (1.0 - c * c)));
  return x * x;
}

double flip_weight(double a, double c) { return c * c * (1.0 - a * a) + a * a * (1.0 - c * c); }

Matrix sparse4(std::initializer_list<std::tuple<int, int, double>> entries) {
  Matrix m = Matrix::Zero(4, 4);
  for (const auto& [r, c, v] : entries) m(r, c) = v;
  return m;
}

// Unit eigenvector (e1, e2) of [[d1, off], [off, d2]] for its larger or
// smaller eigenvalue, sign fixed so the first nonzero component is positive.
struct BlockEigen {
  double high, low;
  double e1, e2;  // eigenvector for `high`
};

BlockEigen block_eigen(double d1, double d2, double off) {
  const double root = std::sqrt((d1 - d2) * (d1 - d2) + 4.0 * off * off);
  BlockEigen out{0.5 * (d1 + d2 + root), 0.5 * (d1 + d2 - root), 1.0, 0.0};
  if (root == 0.0) return out;
  // Rows of (M - high I) v = 0; pick the better-conditioned one.
  double e1 = 0.0;
  double e2 = 0.0;
  if (std::abs(d1 - out.high) + std::abs(off) >= std::abs(d2 - out.high) + std::abs(off) &&
      std::abs(d1 - out.high) + std::abs(off) > 0.0) {
    e1 = off;
    e2 = out.high - d1;
  } else {
    e1 = out.high - d2;
    e2 = off;
  }
  const double norm = std::hypot(e1, e2);
  e1 /= norm;
  e2 /= norm;
  if (e1 < 0.0 || (e1 == 0.0 && e2 < 0.0)) {
    e1 = -e1;
    e2 = -e2;
  }
  out.e1 = e1;
  out.e2 = e2;
  return out;
}

}  // namespace

bool identity_is_covariant(Scenario s) { return s != Scenario::kProtocol; }

RealVector objective_vector(const CovariantAnsatz& ansatz, double a, double c) {
  require_unit_interval(a, "a");
  require_unit_interval(c, "c");
  const Matrix rho_in = SchmidtState(a).density();
  const Matrix rho_out =
      ansatz.scenario == Scenario::kProtocol ? rho_in : SchmidtState(c).density();
  const Matrix weight = kron(rho_out, rho_in.transpose());
  RealVector out(ansatz.parameter_count());
  for (int k = 0; k < ansatz.parameter_count(); ++k) {
    out(k) = (weight * ansatz.terms[static_cast<std::size_t>(k)].basis).trace().real();
  }
  return out;
}

RealVector objective_vector(Scenario s, double a, double c) {
  return objective_vector(cached_ansatz(s), a, c);
}

EqualitySystem tp_constraint_rows(const CovariantAnsatz& ansatz) {
  const int n = ansatz.parameter_count();
  // Candidate rows: real and imaginary parts of each entry of Tr_out B_k.
  RealMatrix all(32, n);
  RealVector rhs(32);
  std::vector<Matrix> reduced;
  reduced.reserve(static_cast<std::size_t>(n));
  for (const auto& t : ansatz.terms) {
    reduced.push_back(partial_trace(t.basis, four_qubits(), {factor::kAliceIn, factor::kBobIn}));
  }
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const int row = 2 * (4 * r + c);
      for (int k = 0; k < n; ++k) {
        all(row, k) = reduced[static_cast<std::size_t>(k)](r, c).real();
        all(row + 1, k) = reduced[static_cast<std::size_t>(k)](r, c).imag();
      }
      rhs(row) = (r == c) ? 1.0 : 0.0;
      rhs(row + 1) = 0.0;
    }
  }

  // Greedy selection of independent rows, in order.
  std::vector<int> keep;
  std::vector<RealVector> ortho;
  for (int i = 0; i < all.rows(); ++i) {
    RealVector v = all.row(i).transpose();
    for (const auto& q : ortho) v -= q.dot(v) * q;
    if (v.norm() > 1e-10 * std::max(1.0, all.row(i).norm())) {
      keep.push_back(i);
      ortho.push_back(v.normalized());
    }
  }
  EqualitySystem sys{RealMatrix(static_cast<Eigen::Index>(keep.size()), n),
                     RealVector(static_cast<Eigen::Index>(keep.size()))};
  for (std::size_t i = 0; i < keep.size(); ++i) {
    sys.rows.row(static_cast<Eigen::Index>(i)) = all.row(keep[i]);
    sys.rhs(static_cast<Eigen::Index>(i)) = rhs(keep[i]);
  }
  return sys;
}

EqualitySystem tp_constraint_rows(Scenario s) { return tp_constraint_rows(cached_ansatz(s)); }

SdpProblem make_problem(const CovariantAnsatz& ansatz, double a, double c, bool ppt) {
  SdpProblem p;
  for (const auto& t : ansatz.terms) p.labels.push_back(t.label);
  p.objective = objective_vector(ansatz, a, c);

  PsdPencil choi{"choi", Matrix::Zero(16, 16), {}};
  for (const auto& t : ansatz.terms) choi.coefficients.push_back(t.basis);
  p.pencils.push_back(std::move(choi));
  if (ppt) {
    PsdPencil pt{"ppt", Matrix::Zero(16, 16), {}};
    for (const auto& t : ansatz.terms) {
      pt.coefficients.push_back(
          partial_transpose(t.basis, four_qubits(), {factor::kBobOut, factor::kBobIn}));
    }
    p.pencils.push_back(std::move(pt));
  }

  auto eq = tp_constraint_rows(ansatz);
  p.equality_rows = std::move(eq.rows);
  p.equality_rhs = std::move(eq.rhs);
  // The fully depolarizing channel is covariant, TP and strictly inside both cones.
  p.initial_point = ansatz.coordinates(ChoiMatrix::fully_depolarizing().matrix());
  return p;
}

PointResult solve_point(const CovariantAnsatz& ansatz, double a, double c, bool ppt,
                        const SdpOptions& options) {
  const SdpProblem problem = make_problem(ansatz, a, c, ppt);
  SdpSolution sol = solve(problem, options);
  Matrix r = ansatz.assemble(sol.x);
  r = 0.5 * (r + r.adjoint());
  return {sol.objective, ChoiMatrix(std::move(r)), std::move(sol)};
}

PointResult solve_point(Scenario s, double a, double c, bool ppt, const SdpOptions& options) {
  return solve_point(cached_ansatz(s), a, c, ppt, options);
}

std::optional<double> analytic_fidelity(Scenario s, double a, double c) {
  require_unit_interval(a, "a");
  require_unit_interval(c, "c");
  const double x2 = overlap_squared(a, c);
  const double y = flip_weight(a, c);
  switch (s) {
    case Scenario::kSemiCovariant:
      if (a <= c + 1e-12) return x2;
      return std::nullopt;
    case Scenario::kFullSimultaneous:
      return std::max(x2, x2 / 10.0 + 3.0 * y / 5.0);
    case Scenario::kFullIndependent:
      return std::max(x2, x2 / 9.0 + 4.0 * y / 9.0);
    case Scenario::kProtocol:
      return std::nullopt;
  }
  return std::nullopt;
}

KrausSet published_kraus(Scenario s, double d011) {
  if (s == Scenario::kFullSimultaneous) {
    if (!(d011 >= 0.0 && d011 <= 1.0)) {
      throw ParameterError("d011 must lie in [0, 1], got " + std::to_string(d011));
    }
    const double f13 = std::sqrt((1.0 - d011) / 6.0);
    const double f112 = std::sqrt((1.0 - d011) / 12.0);
    const double f4 = std::sqrt(d011) / 2.0;
    const double f5 = 1.0 / std::sqrt(10.0);
    const double f67 = std::sqrt(3.0 / 20.0);
    const double f89 = std::sqrt(3.0 / 5.0);
    return {
        f13 * sparse4({{0, 1, -1}, {0, 2, 1}}),
        f13 * sparse4({{3, 1, 1}, {3, 2, -1}}),
        f112 * sparse4({{1, 1, -1}, {1, 2, 1}, {2, 1, -1}, {2, 2, 1}}),
        f4 * sparse4({{1, 1, 1}, {1, 2, -1}, {2, 1, -1}, {2, 2, 1}}),
        f5 * sparse4({{0, 0, 1}, {1, 1, -1}, {1, 2, -1}, {2, 1, -1}, {2, 2, -1}, {3, 3, 1}}),
        f67 * sparse4({{1, 0, -1}, {2, 0, -1}, {3, 1, 1}, {3, 2, 1}}),
        f67 * sparse4({{0, 1, -1}, {0, 2, -1}, {1, 3, 1}, {2, 3, 1}}),
        f89 * sparse4({{0, 3, 1}}),
        f89 * sparse4({{3, 0, 1}}),
    };
  }
  if (s == Scenario::kFullIndependent) {
    const double r2 = std::sqrt(2.0) / 3.0;
    const Matrix a1 = sparse4({{0, 0, 1.0 / 3}, {1, 1, -1.0 / 3}, {2, 2, -1.0 / 3}, {3, 3, 1.0 / 3}});
    const Matrix a2 = sparse4({{1, 0, -r2}, {3, 2, r2}});
    const Matrix a3 = sparse4({{2, 0, -r2}, {3, 1, r2}});
    const Matrix a4 = sparse4({{3, 0, 2.0 / 3}});
    const Matrix a5 = sparse4({{2, 1, 2.0 / 3}});
    return {a1, a2, a3, a4, a5, a2.adjoint(), a3.adjoint(), a5.adjoint(), a4.adjoint()};
  }
  throw std::invalid_argument("no published Kraus set for scenario " + std::string(scenario_tag(s)));
}

ProtocolParams protocol_params_from(const CovariantAnsatz& ansatz, const RealVector& x) {
  auto get = [&](const char* label) {
    const int k = ansatz.index_of(label);
    if (k < 0) throw std::invalid_argument(std::string("ansatz has no parameter ") + label);
    return x(k);
  };
  return {get("s_11"), get("s_44"), get("s_7+"), get("a_11"),
          get("a_44"), get("a_7+"), get("s_22"), get("s_33")};
}

ProtocolClosedForm protocol_closed_form(const ProtocolParams& q) {
  const double rs = std::sqrt(q.s11 * q.s11 - 2 * q.s11 * q.s44 + q.s44 * q.s44 + 4 * q.s7 * q.s7);
  const double ra = std::sqrt(q.a11 * q.a11 - 2 * q.a11 * q.a44 + q.a44 * q.a44 + 4 * q.a7 * q.a7);
  const double r2 = 1.0 / std::sqrt(2.0);
  return {(-q.s11 + q.s44 + rs) / (2 * q.s7),
          (-q.s11 + q.s44 - rs) / (2 * q.s7),
          (-q.a11 + q.a44 + ra) / (2 * q.a7),
          (-q.a11 + q.a44 - ra) / (2 * q.a7),
          r2 * std::sqrt(std::max(0.0, q.s11 + q.s44 + rs)),
          r2 * std::sqrt(std::max(0.0, q.s11 + q.s44 - rs)),
          r2 * std::sqrt(std::max(0.0, q.a11 + q.a44 + ra)),
          r2 * std::sqrt(std::max(0.0, q.a11 + q.a44 - ra)),
          std::sqrt(std::max(0.0, q.s22)),
          std::sqrt(std::max(0.0, q.s33))};
}

KrausSet protocol_kraus(const ProtocolParams& q) {
  constexpr double kTol = 1e-9;
  const BlockEigen sym = block_eigen(q.s11, q.s44, q.s7);
  const BlockEigen anti = block_eigen(q.a11, q.a44, q.a7);
  if (sym.low < -kTol || anti.low < -kTol || q.s22 < -kTol || q.s33 < -kTol) {
    throw ParameterError("protocol_kraus: coefficient blocks are not positive semidefinite");
  }
  const double d1 = std::sqrt(std::max(0.0, sym.high));
  const double d2 = std::sqrt(std::max(0.0, sym.low));
  const double d3 = std::sqrt(std::max(0.0, anti.high));
  const double d4 = std::sqrt(std::max(0.0, anti.low));
  const double d5 = std::sqrt(std::max(0.0, q.s22));
  const double d6 = std::sqrt(std::max(0.0, q.s33));
  const double r2 = 1.0 / std::sqrt(2.0);

  // Each operator is (copy vector on A_out B_in) x (spin state on B_out A_in).
  // Copy vectors: (x, y) weights |00> and |11>; the 01 and 10 copies carry
  // s22 and s33. Spin states: singlet-like (|00>+|11>)/sqrt2 for the
  // antisymmetric block, (|00>-|11>)/sqrt2, |01>, |10> for the symmetric one.
  auto triplet = [&](double x, double y) -> KrausSet {
    return KrausSet{r2 * sparse4({{0, 0, x}, {1, 2, -x}, {2, 1, y}, {3, 3, -y}}),
                    sparse4({{1, 0, x}, {3, 1, y}}), sparse4({{0, 2, x}, {2, 3, y}})};
  };
  auto singlet = [&](double x, double y) -> Matrix {
    return r2 * sparse4({{0, 0, x}, {1, 2, x}, {2, 1, y}, {3, 3, y}});
  };

  KrausSet k;
  for (const Matrix& m : triplet(d1 * sym.e1, d1 * sym.e2)) k.push_back(m);
  for (const Matrix& m : triplet(-d2 * sym.e2, d2 * sym.e1)) k.push_back(m);
  k.push_back(singlet(d3 * anti.e1, d3 * anti.e2));
  k.push_back(singlet(-d4 * anti.e2, d4 * anti.e1));
  k.push_back(d5 * r2 * sparse4({{0, 1, 1}, {1, 3, -1}}));
  k.push_back(d5 * sparse4({{1, 1, 1}}));
  k.push_back(d5 * sparse4({{0, 3, 1}}));
  k.push_back(d6 * r2 * sparse4({{2, 0, 1}, {3, 2, -1}}));
  k.push_back(d6 * sparse4({{3, 0, 1}}));
  k.push_back(d6 * sparse4({{2, 2, 1}}));
  return k;
}

CovarianceReport verify_covariance(const ChoiMatrix& choi, Scenario s, int samples,
                                   std::uint64_t seed, double a, double c) {
  CovarianceReport rep;
  const Matrix& r = choi.matrix();
  const Vector chi = SchmidtState(a).ket();
  const Vector phi = s == Scenario::kProtocol ? chi : SchmidtState(c).ket();
  const Matrix id2 = ops::identity(2);
  const double base = fidelity_functional(r, chi * chi.adjoint(), phi * phi.adjoint());
  for (int i = 0; i < samples; ++i) {
    const Matrix u1 = haar_su2(seed + 2 * static_cast<std::uint64_t>(i));
    const Matrix u2 = haar_su2(seed + 2 * static_cast<std::uint64_t>(i) + 1);
    const Matrix g = group_element(s, u1, u2);
    rep.commutator_residual = std::max(rep.commutator_residual, (r * g - g * r).norm());

    Matrix v_in;
    Matrix v_out;
    switch (s) {
      case Scenario::kSemiCovariant:
        v_in = v_out = kron(id2, u1);
        break;
      case Scenario::kFullSimultaneous:
        v_in = v_out = kron(u1, u1);
        break;
      case Scenario::kFullIndependent:
        v_in = v_out = kron(u1, u2);
        break;
      case Scenario::kProtocol:
        v_in = kron(u1, id2);
        v_out = kron(id2, u1);
        break;
    }
    const Vector in = v_in * chi;
    const Vector out = v_out * phi;
    const double rotated = fidelity_functional(r, in * in.adjoint(), out * out.adjoint());
    rep.fidelity_deviation = std::max(rep.fidelity_deviation, std::abs(rotated - base));
  }
  return rep;
}

namespace {

template <typename Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min(jobs, std::max(count, 1));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> uniform_grid(int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
  return v;
}

SurfacePoint solve_surface_point(Scenario s, double a, double c, bool ppt, const SdpOptions& options) {
  SurfacePoint pt;
  pt.a = a;
  pt.c = c;
  const auto free = solve_point(s, a, c, false, options);
  pt.fidelity_noppt = free.fidelity;
  pt.status = free.solution.status;
  pt.gap = free.solution.gap;
  if (ppt) {
    const auto constrained = solve_point(s, a, c, true, options);
    pt.fidelity = constrained.fidelity;
    pt.gap = constrained.solution.gap;
    if (constrained.solution.status != SdpStatus::kOptimal) pt.status = constrained.solution.status;
  } else {
    pt.fidelity = free.fidelity;
  }
  pt.analytic = analytic_fidelity(s, a, c);
  if (identity_is_covariant(s)) {
    const double f_id =
        channel_fidelity(ChoiMatrix::identity_channel(), SchmidtState(a), SchmidtState(c));
    pt.identity_optimal = f_id >= pt.fidelity - 1e-6;
  }
  return pt;
}

}  // namespace

FidelitySurface grid_sweep(Scenario s, int grid_n, bool ppt, int jobs, const SdpOptions& options) {
  if (grid_n < 2) throw ParameterError("grid size must be at least 2");
  const auto values = uniform_grid(grid_n);
  FidelitySurface surface{s, ppt, grid_n, {}};
  const bool one_dim = s == Scenario::kProtocol;
  const int count = one_dim ? grid_n : grid_n * grid_n;
  surface.points.resize(static_cast<std::size_t>(count));
  cached_ansatz(s);  // build before the workers start
  parallel_for(count, jobs, [&](int i) {
    const double a = one_dim ? values[static_cast<std::size_t>(i)] : values[static_cast<std::size_t>(i / grid_n)];
    const double c = one_dim ? a : values[static_cast<std::size_t>(i % grid_n)];
    surface.points[static_cast<std::size_t>(i)] = solve_surface_point(s, a, c, ppt, options);
  });
  return surface;
}

void write_csv(std::ostream& os, const FidelitySurface& surface) {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  os << "scenario,a,c,ppt,fidelity,fidelity_noppt,analytic,gap,identity_optimal\n";
  for (const auto& p : surface.points) {
    os << scenario_tag(surface.scenario) << ',' << num(p.a) << ',' << num(p.c) << ','
       << (surface.ppt ? 1 : 0) << ',' << num(p.fidelity) << ',' << num(p.fidelity_noppt) << ','
       << (p.analytic ? num(*p.analytic) : std::string()) << ',' << num(p.gap) << ','
       << (p.identity_optimal ? 1 : 0) << '\n';
  }
}

IdentityRegion identity_region(int grid_n, int jobs, const SdpOptions& options) {
  if (grid_n < 2) throw ParameterError("grid size must be at least 2");
  IdentityRegion region{grid_n, uniform_grid(grid_n), {}};
  region.points.resize(static_cast<std::size_t>(grid_n * grid_n));
  cached_ansatz(Scenario::kSemiCovariant);
  parallel_for(grid_n * grid_n, jobs, [&](int i) {
    const double a = region.values[static_cast<std::size_t>(i / grid_n)];
    const double c = region.values[static_cast<std::size_t>(i % grid_n)];
    SurfacePoint pt;
    pt.a = a;
    pt.c = c;
    const auto res = solve_point(Scenario::kSemiCovariant, a, c, true, options);
    pt.fidelity = res.fidelity;
    pt.gap = res.solution.gap;
    pt.status = res.solution.status;
    pt.analytic = analytic_fidelity(Scenario::kSemiCovariant, a, c);
    const double f_id =
        channel_fidelity(ChoiMatrix::identity_channel(), SchmidtState(a), SchmidtState(c));
    pt.identity_optimal = f_id >= pt.fidelity - 1e-6;
    region.points[static_cast<std::size_t>(i)] = pt;
  });
  return region;
}

std::optional<FreeParameterInterval> d011_ppt_interval(int samples) {
  auto is_ppt = [](double d) {
    return check_ppt(choi_from_kraus(published_kraus(Scenario::kFullSimultaneous, d))) >= -1e-8;
  };
  std::optional<int> first;
  std::optional<int> last;
  for (int i = 0; i < samples; ++i) {
    const double d = static_cast<double>(i) / (samples - 1);
    if (is_ppt(d)) {
      if (!first) first = i;
      last = i;
    }
  }
  if (!first) return std::nullopt;
  auto refine = [&](double inside, double outside) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (inside + outside);
      (is_ppt(mid) ? inside : outside) = mid;
    }
    return inside;
  };
  const double step = 1.0 / (samples - 1);
  double lo = *first * step;
  double hi = *last * step;
  if (*first > 0) lo = refine(lo, lo - step);
  if (*last < samples - 1) hi = refine(hi, hi + step);
  return FreeParameterInterval{lo, hi, 0.5 * (lo + hi)};
}

}  // namespace covlocc
