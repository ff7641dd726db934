// covlocc command-line front end.
//
// Exit codes: 0 success, 1 argument or I/O error, 2 solver failure or
// tolerance breach.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "covlocc/channel.hpp"
#include "covlocc/irreps.hpp"
#include "covlocc/linalg.hpp"
#include "covlocc/scenarios.hpp"
#include "covlocc/sdp.hpp"
#include "json.hpp"

namespace {

using namespace covlocc;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kFailure = 2;

struct RunConfig {
  std::string scenario = "semicov";
  double a = 0.6;
  double c = 0.8;
  bool ppt = true;
  int grid = 0;  // 0: scenario default
  int jobs = 0;
  std::uint64_t seed = 1;
  int samples = 20;
  double tol = 1e-7;
  std::vector<double> check_tol;
  std::string out;
  std::optional<double> d011;
  std::vector<double> params;  // s11 s44 s7 a11 a44 a7 s22 s33
  bool check = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Scenario scenario_of(const RunConfig& cfg) {
  try {
    return parse_scenario(cfg.scenario);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

SdpOptions solver_options(const RunConfig& cfg) {
  SdpOptions o;
  o.gap_tolerance = cfg.tol;
  return o;
}

// Writes to --out, or stdout when it is empty or "-".
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot open " + path + " for writing");
  fn(os);
  os.flush();
  if (!os) throw UsageError("write to " + path + " failed");
}

// Eigenvalues above rel * largest; the solver leaves the rest near 1e-9.
int significant_rank(const ChoiMatrix& choi, double rel) {
  const RealVector ev = eig_hermitian(choi.matrix()).values;
  int n = 0;
  for (double v : ev) n += v > rel * ev.maxCoeff();
  return n;
}

int cmd_solve(const RunConfig& cfg) {
  const Scenario s = scenario_of(cfg);
  const double c = s == Scenario::kProtocol ? cfg.a : cfg.c;
  const SdpOptions opts = solver_options(cfg);
  const PointResult with = solve_point(s, cfg.a, c, true, opts);
  const PointResult without = solve_point(s, cfg.a, c, false, opts);
  const PointResult& chosen = cfg.ppt ? with : without;
  const CovarianceReport cov = verify_covariance(chosen.choi, s, cfg.samples, cfg.seed, cfg.a, c);
  const KrausSet kraus = kraus_from_choi(chosen.choi);
  const auto analytic = analytic_fidelity(s, cfg.a, c);

  std::cout << "scenario: " << scenario_tag(s) << "\n"
            << "a: " << fmt(cfg.a) << "\n"
            << "c: " << fmt(c) << "\n"
            << "ppt: " << (cfg.ppt ? "yes" : "no") << "\n"
            << "fidelity: " << fmt(chosen.fidelity) << "\n"
            << "fidelity_ppt: " << fmt(with.fidelity) << "\n"
            << "fidelity_noppt: " << fmt(without.fidelity) << "\n"
            << "analytic: " << (analytic ? fmt(*analytic) : std::string("n/a")) << "\n"
            << "status: " << to_string(chosen.solution.status) << "\n"
            << "gap: " << fmt(chosen.solution.gap, 3) << "\n"
            << "iterations: " << chosen.solution.iterations << "\n"
            << "tp_residual: " << fmt(check_tp(chosen.choi), 3) << "\n"
            << "covariance_residual: " << fmt(cov.commutator_residual, 3) << "\n"
            << "kraus_operators: " << kraus.size() << "\n"
            << "kraus_operators_above_1e-6: " << significant_rank(chosen.choi, 1e-6) << "\n";
  const bool ok = with.solution.status == SdpStatus::kOptimal &&
                  without.solution.status == SdpStatus::kOptimal;
  return ok ? kOk : kFailure;
}

int cmd_sweep(const RunConfig& cfg) {
  const Scenario s = scenario_of(cfg);
  int n = cfg.grid;
  if (n == 0) n = s == Scenario::kProtocol ? 101 : 51;
  if (n < 2) throw UsageError("--grid must be at least 2");
  const FidelitySurface surface = grid_sweep(s, n, cfg.ppt, cfg.jobs, solver_options(cfg));
  with_output(cfg.out, [&](std::ostream& os) { write_csv(os, surface); });
  int failed = 0;
  for (const auto& p : surface.points) failed += p.status != SdpStatus::kOptimal;
  if (failed > 0) {
    std::cerr << failed << " grid points did not converge\n";
    return kFailure;
  }
  return kOk;
}

struct CheckTolerances {
  double tp = 1e-10;
  double covariance = 1e-8;
  double fidelity = 1e-6;
};

CheckTolerances check_tolerances(const RunConfig& cfg) {
  CheckTolerances t;
  if (cfg.check_tol.size() == 1) {
    t.tp = t.covariance = t.fidelity = cfg.check_tol[0];
  } else if (cfg.check_tol.size() == 3) {
    t = {cfg.check_tol[0], cfg.check_tol[1], cfg.check_tol[2]};
  } else if (!cfg.check_tol.empty()) {
    throw UsageError("--check-tol takes one value or three (tp covariance fidelity)");
  }
  return t;
}

bool report(const char* name, double value, double tol) {
  const bool pass = value <= tol;
  std::cout << name << ": " << fmt(value, 3) << " (tol " << fmt(tol, 3) << ") "
            << (pass ? "ok" : "FAIL") << "\n";
  return pass;
}

int cmd_verify(const RunConfig& cfg) {
  const Scenario s = scenario_of(cfg);
  const CheckTolerances tol = check_tolerances(cfg);
  KrausSet kraus;
  std::vector<std::pair<double, double>> points;
  std::vector<double> reference;

  if (s == Scenario::kFullSimultaneous || s == Scenario::kFullIndependent) {
    double d011 = 0.0;
    if (s == Scenario::kFullSimultaneous) {
      if (cfg.d011) {
        d011 = *cfg.d011;
      } else {
        const auto iv = d011_ppt_interval();
        d011 = iv ? iv->midpoint : 0.25;
      }
    }
    try {
      kraus = published_kraus(s, d011);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    if (s == Scenario::kFullSimultaneous) std::cout << "d011: " << fmt(d011) << "\n";
    points = {{0.0, 1.0}, {0.1, 0.9}, {0.3, 0.6}, {0.5, 0.5}, {0.9, 0.2}};
    const double w = s == Scenario::kFullSimultaneous ? 0.1 : 1.0 / 9.0;
    const double v = s == Scenario::kFullSimultaneous ? 0.6 : 4.0 / 9.0;
    for (auto [a, c] : points) {
      const double x = a * c + std::sqrt((1 - a * a) * (1 - c * c));
      const double y = c * c * (1 - a * a) + a * a * (1 - c * c);
      reference.push_back(w * x * x + v * y);
    }
  } else if (s == Scenario::kProtocol) {
    ProtocolParams q;
    SdpOptions tight = solver_options(cfg);
    tight.gap_tolerance = std::min(tight.gap_tolerance, 1e-10);
    tight.barrier_floor = 1e-12;
    const PointResult opt = solve_point(s, cfg.a, cfg.a, true, tight);
    if (opt.solution.status != SdpStatus::kOptimal) {
      std::cerr << "protocol SDP did not converge\n";
      return kFailure;
    }
    if (cfg.params.empty()) {
      q = protocol_params_from(build_ansatz(s), opt.solution.x);
    } else if (cfg.params.size() == 8) {
      q = {cfg.params[0], cfg.params[1], cfg.params[2], cfg.params[3],
           cfg.params[4], cfg.params[5], cfg.params[6], cfg.params[7]};
    } else {
      throw UsageError("--params takes eight values: s11 s44 s7 a11 a44 a7 s22 s33");
    }
    try {
      kraus = protocol_kraus(q);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    points = {{cfg.a, cfg.a}};
    reference = {opt.fidelity};
    std::cout << "a: " << fmt(cfg.a) << "\n";
  } else {
    throw UsageError("no published Kraus set for scenario " + std::string(scenario_tag(s)));
  }

  const ChoiMatrix choi = choi_from_kraus(kraus);
  double fid_dev = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [a, c] = points[i];
    fid_dev = std::max(fid_dev,
                       std::abs(channel_fidelity(choi, SchmidtState(a), SchmidtState(c)) - reference[i]));
  }
  const CovarianceReport cov =
      verify_covariance(choi, s, cfg.samples, cfg.seed, points[0].first, points[0].second);

  std::cout << "scenario: " << scenario_tag(s) << "\n"
            << "kraus_operators: " << kraus.size() << "\n";
  bool ok = report("tp_residual", kraus_tp_residual(kraus), tol.tp);
  ok = report("covariance_residual", cov.commutator_residual, tol.covariance) && ok;
  ok = report("fidelity_deviation", fid_dev, tol.fidelity) && ok;
  std::cout << "ppt_min_eigenvalue: " << fmt(check_ppt(choi), 3) << "\n"
            << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kOk : kFailure;
}

int cmd_export(const RunConfig& cfg) {
  const Scenario s = scenario_of(cfg);
  const double c = s == Scenario::kProtocol ? cfg.a : cfg.c;
  const SdpProblem problem = make_problem(build_ansatz(s), cfg.a, c, cfg.ppt);
  nlohmann::ordered_json meta;
  meta["scenario"] = std::string(scenario_tag(s));
  meta["a"] = cfg.a;
  meta["c"] = c;
  meta["ppt"] = cfg.ppt;
  if (s == Scenario::kFullSimultaneous) {
    if (cfg.d011) {
      meta["d011"] = *cfg.d011;
    } else if (const auto iv = d011_ppt_interval()) {
      meta["d011"] = iv->midpoint;
    }
  }
  std::ostringstream id;
  id << scenario_tag(s) << "-a" << fmt(cfg.a, 6) << "-c" << fmt(c, 6) << (cfg.ppt ? "-ppt" : "-free");
  const std::string text = export_problem_json(problem, id.str(), meta.dump());
  with_output(cfg.out, [&](std::ostream& os) { os << text; });
  return kOk;
}

int cmd_irreps(const RunConfig& cfg) {
  const IrrepBasis basis = standard_irrep_basis();
  const Matrix cols = basis.as_columns();
  const double gram = (cols.adjoint() * cols - Matrix::Identity(16, 16)).norm();
  for (const auto& b : basis.blocks) {
    std::cout << "D(" << b.total_momentum << ")_" << b.copy << b.copy << ":";
    for (const Vector& v : b.vectors) {
      std::cout << " [";
      bool first = true;
      for (int i = 0; i < 16; ++i) {
        if (std::abs(v(i)) < 1e-14) continue;
        std::cout << (first ? "" : " ") << fmt(v(i).real(), 6) << "|";
        for (int q = 3; q >= 0; --q) std::cout << ((i >> q) & 1);
        std::cout << ">";
        first = false;
      }
      std::cout << "]";
    }
    std::cout << "\n";
  }
  std::cout << "gram_residual: " << fmt(gram, 3) << "\n";
  bool ok = gram <= 1e-12;
  for (Scenario s : kAllScenarios) {
    const CovariantAnsatz& an = build_ansatz(s);
    double residual = 0.0;
    for (int i = 0; i < cfg.samples; ++i) {
      const Matrix u1 = haar_su2(cfg.seed + 2 * static_cast<std::uint64_t>(i));
      const Matrix u2 = haar_su2(cfg.seed + 2 * static_cast<std::uint64_t>(i) + 1);
      const Matrix g = group_element(s, u1, u2);
      for (const auto& t : an.terms) residual = std::max(residual, (t.basis * g - g * t.basis).norm());
    }
    const int dim = numerical_commutant_dimension(s, 30, cfg.seed);
    std::cout << scenario_tag(s) << ": parameters " << an.parameter_count() << ", commutant dimension "
              << dim << ", commutator residual " << fmt(residual, 3) << "\n";
    if (cfg.check) ok = ok && residual <= 1e-9 && dim == an.parameter_count();
  }
  if (cfg.check) std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return !cfg.check || ok ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal covariant LOCC transformations between two-qubit pure states"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_point = [&](CLI::App* sub) {
    sub->add_option("--scenario", cfg.scenario, "semicov | full-sim | full-ind | protocol")
        ->capture_default_str();
    sub->add_option("--a", cfg.a, "input Schmidt coefficient")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--c", cfg.c, "target Schmidt coefficient (ignored by protocol)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  };
  auto add_ppt = [&](CLI::App* sub) {
    sub->add_flag("--ppt,!--no-ppt", cfg.ppt, "impose the PPT constraint (default on)");
  };
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "solver gap tolerance")->capture_default_str();
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "seed for Haar samples")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "number of Haar samples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one point and report");
  add_point(solve);
  add_ppt(solve);
  add_tol(solve);
  add_seed(solve);

  CLI::App* sweep = app.add_subcommand("sweep", "fidelity surface as CSV");
  sweep->add_option("--scenario", cfg.scenario, "semicov | full-sim | full-ind | protocol")->capture_default_str();
  sweep->add_option("--grid", cfg.grid, "points per axis (default 51, protocol 101)");
  sweep->add_option("--out", cfg.out, "CSV path (default stdout)");
  sweep->add_option("--jobs", cfg.jobs, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  add_ppt(sweep);
  add_tol(sweep);

  CLI::App* verify = app.add_subcommand("verify", "check a published or protocol Kraus set");
  add_point(verify);
  add_seed(verify);
  add_tol(verify);
  verify->add_option("--d011", cfg.d011, "full-sim free parameter (default: PPT interval midpoint)");
  verify->add_option("--params", cfg.params, "protocol coefficients s11 s44 s7 a11 a44 a7 s22 s33");
  verify->add_option("--check-tol", cfg.check_tol, "tolerance for all checks, or three: tp covariance fidelity");

  CLI::App* exp = app.add_subcommand("export", "write the SDP as JSON");
  add_point(exp);
  add_ppt(exp);
  exp->add_option("--out", cfg.out, "JSON path (default stdout)");
  exp->add_option("--d011", cfg.d011, "full-sim free parameter recorded in meta");

  CLI::App* irreps = app.add_subcommand("irreps", "print the irrep basis and commutant diagnostics");
  irreps->add_flag("--check", cfg.check, "exit 2 unless all structural checks pass");
  add_seed(irreps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(cfg);
    if (*sweep) return cmd_sweep(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*exp) return cmd_export(cfg);
    if (*irreps) return cmd_irreps(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
