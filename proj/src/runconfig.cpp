#include "ptspec/runconfig.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ptspec/asymptotics.hpp"
#include "ptspec/criteria.hpp"
#include "ptspec/errors.hpp"
#include "ptspec/sweep.hpp"

namespace ptspec {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

double effective_tol(const RunConfig& cfg) {
  if (cfg.tol > 0.0) return cfg.tol;
  if (const char* env = std::getenv("PT_SPECTRAL_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0) return v;
  }
  return 1e-10;
}

const char* class_name(Classification c) {
  return c == Classification::Real ? "real" : "complex_pair";
}

const char* verdict_name(OverallVerdict v) {
  switch (v) {
    case OverallVerdict::ProvedPositiveReal: return "ProvedPositiveReal";
    case OverallVerdict::ProvedRealGivenReal: return "ProvedRealGivenReal";
    default: return "Unknown";
  }
}

const char* solvable_name(SolvableVerdict v) {
  switch (v) {
    case SolvableVerdict::StrictlyBelow: return "StrictlyBelow";
    case SolvableVerdict::Boundary: return "Boundary";
    case SolvableVerdict::Above: return "Above";
    default: return "NotApplicable";
  }
}

void write_text(const RunConfig& cfg, const std::string& text,
                std::ostream& fallback) {
  if (cfg.out.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw Error("cannot open output file: " + cfg.out);
  f << text;
}

struct ResolvedProblem {
  PotentialSpec spec;
  double lambda_scale = 1.0;
};

ResolvedProblem resolve_problem(const RunConfig& cfg) {
  ResolvedProblem rp;
  if (cfg.cubic) {
    const auto& c = *cfg.cubic;
    const CubicBridge bridge = cubic_bridge(c[0], c[1], c[2]);
    rp.spec = bridge.spec;
    rp.lambda_scale = bridge.lambda_scale;
  } else {
    rp.spec = PotentialSpec(cfg.m, cfg.a);
  }
  return rp;
}

std::string spectrum_json(const RunConfig& cfg, const ResolvedProblem& rp,
                          const FindReport& rep, double tol) {
  std::ostringstream os;
  os << "{\n  \"m\": " << rp.spec.m << ",\n  \"a\": [";
  for (size_t i = 0; i < rp.spec.a.size(); ++i)
    os << (i ? ", " : "") << fmt17(rp.spec.a[i]);
  os << "],\n  \"eigenvalues\": [\n";
  for (size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    const Eigenvalue& ev = rep.eigenvalues[i];
    const cplx lam = ev.lambda * rp.lambda_scale;
    os << "    {\"re\": " << fmt17(lam.real())
       << ", \"im\": " << fmt17(lam.imag()) << ", \"index\": " << ev.index
       << ", \"residual\": " << fmt17(ev.residual) << ", \"class\": \""
       << class_name(ev.classification) << "\"}";
    os << (i + 1 < rep.eigenvalues.size() ? ",\n" : "\n");
  }
  os << "  ],\n  \"radiusUsed\": " << fmt17(rep.radius_used)
     << ",\n  \"tol\": " << fmt17(tol);
  if (!rep.complete) os << ",\n  \"incomplete\": true";
  if (cfg.cubic)
    os << ",\n  \"lambdaScale\": " << fmt17(rp.lambda_scale);
  os << "\n}\n";
  return os.str();
}

int run_spectrum(const RunConfig& cfg, std::ostream& fallback) {
  const ResolvedProblem rp = resolve_problem(cfg);
  const double tol = effective_tol(cfg);
  RaySpec ray;
  ray.rel_tol = tol;
  ray.radius = cfg.radius;
  FindOptions fo;
  fo.parallel = cfg.parallel;
  const FindReport rep =
      find_eigenvalues(rp.spec, cfg.count, cfg.window, ray, fo);
  write_text(cfg, spectrum_json(cfg, rp, rep, tol), fallback);
  return rep.complete ? kExitOk : kExitIncomplete;
}

int run_grid(const RunConfig& cfg, std::ostream& fallback) {
  const ResolvedProblem rp = resolve_problem(cfg);
  GridSpec gs;
  if (cfg.window) {
    gs.re0 = cfg.window->re0;
    gs.re1 = cfg.window->re1;
    gs.im0 = cfg.window->im0;
    gs.im1 = cfg.window->im1;
  } else {
    const double hi =
        (rp.spec.m >= 3)
            ? 1.2 * asymptotic_eigenvalue(rp.spec.m, cfg.count + 2)
            : 1.2 * (2.0 * (cfg.count + 2) - 1.0 +
                     0.25 * rp.spec.a[0] * rp.spec.a[0]);
    gs = {-1.0, hi, -0.5 * (hi + 1.0), 0.5 * (hi + 1.0), gs.nx, gs.ny};
  }
  gs.nx = cfg.grid_nx;
  gs.ny = cfg.grid_ny;
  RaySpec ray;
  ray.rel_tol = effective_tol(cfg);
  ray.radius = cfg.radius;
  const auto pts = evaluate_grid(rp.spec, gs, ray, cfg.parallel);
  std::ostringstream os;
  os << "re_lambda,im_lambda,re_M,im_M,log_abs_M\n";
  for (const GridPoint& p : pts)
    os << fmt17(p.lambda.real()) << ',' << fmt17(p.lambda.imag()) << ','
       << fmt17(p.M.real()) << ',' << fmt17(p.M.imag()) << ','
       << fmt17(p.log_abs_M) << '\n';
  write_text(cfg, os.str(), fallback);
  return kExitOk;
}

int run_sweep(const RunConfig& cfg, std::ostream& fallback) {
  const ResolvedProblem rp = resolve_problem(cfg);
  SweepOptions so;
  so.warm_start = cfg.warm_start;
  so.parallel = cfg.parallel && !cfg.warm_start;
  so.ray.rel_tol = effective_tol(cfg);
  so.ray.radius = cfg.radius;
  const SweepResult res =
      sweep_coefficient(rp.spec, cfg.coeff_index, cfg.range_lo, cfg.range_hi,
                        cfg.steps, cfg.count, so);

  std::ostringstream csv;
  csv << "param,trajectory,re_lambda,im_lambda,class\n";
  for (size_t t = 0; t < res.trajectories.size(); ++t) {
    const Trajectory& tr = res.trajectories[t];
    for (size_t i = 0; i < tr.values.size(); ++i) {
      const double p =
          res.parameter_values[static_cast<size_t>(tr.start_step) + i];
      csv << fmt17(p) << ',' << t << ',' << fmt17(tr.values[i].real()) << ','
          << fmt17(tr.values[i].imag()) << ','
          << class_name(tr.classes[i]) << '\n';
    }
  }

  std::ostringstream ev;
  ev << "{\"events\": [";
  for (size_t i = 0; i < res.events.size(); ++i) {
    const CoalescenceEvent& e = res.events[i];
    ev << (i ? ", " : "") << "{\"param_lo\": " << fmt17(e.param_lo)
       << ", \"param_hi\": " << fmt17(e.param_hi)
       << ", \"traj_a\": " << e.traj_a << ", \"traj_b\": " << e.traj_b
       << ", \"ambiguous\": " << (e.ambiguous ? "true" : "false") << "}";
  }
  ev << "]}\n";

  if (cfg.out.empty()) {
    fallback << csv.str() << "# events: " << ev.str();
  } else {
    write_text(cfg, csv.str(), fallback);
    std::ofstream f(cfg.out + ".events.json", std::ios::binary);
    if (!f) throw Error("cannot open events file");
    f << ev.str();
  }
  return kExitOk;
}

int run_check(const RunConfig& cfg, std::ostream& fallback) {
  const ResolvedProblem rp = resolve_problem(cfg);
  const HypothesisReport rep = build_report(rp.spec);
  std::ostringstream os;
  os << "{\n  \"m\": " << rp.spec.m << ",\n  \"a\": [";
  for (size_t i = 0; i < rp.spec.a.size(); ++i)
    os << (i ? ", " : "") << fmt17(rp.spec.a[i]);
  os << "],\n";
  os << "  \"theoremMainWitness\": ";
  if (rep.theorem_main_witness)
    os << *rep.theorem_main_witness;
  else
    os << "null";
  os << ",\n  \"extThmRealityBound\": ";
  if (rep.ext_thm_reality_bound)
    os << fmt17(*rep.ext_thm_reality_bound);
  else
    os << "null";
  os << ",\n  \"extThmPositivityBound\": ";
  if (rep.ext_thm_positivity_bound)
    os << fmt17(*rep.ext_thm_positivity_bound);
  else
    os << "null";
  os << ",\n  \"smallMBounds\": ";
  if (rep.small_m_bounds)
    os << "[" << fmt17(rep.small_m_bounds->first) << ", "
       << fmt17(rep.small_m_bounds->second) << "]";
  else
    os << "null";
  os << ",\n  \"exactlySolvableVerdict\": \""
     << solvable_name(rep.exactly_solvable) << "\"";
  os << ",\n  \"overallVerdict\": \"" << verdict_name(rep.overall) << "\"\n}\n";
  write_text(cfg, os.str(), fallback);
  switch (rep.overall) {
    case OverallVerdict::ProvedPositiveReal: return kExitOk;
    case OverallVerdict::ProvedRealGivenReal: return kExitProvedRealGivenReal;
    default: return kExitUnknown;
  }
}

int run_associated(const RunConfig& cfg, std::ostream& fallback) {
  const ResolvedProblem rp = resolve_problem(cfg);
  RaySpec ray;
  ray.rel_tol = effective_tol(cfg);
  ray.radius = cfg.radius;
  const auto assoc = associated_spectrum(rp.spec, cfg.bc, cfg.count, ray);
  std::ostringstream os;
  os << "[\n";
  for (size_t i = 0; i < assoc.size(); ++i) {
    const AssociatedEigenvalue& ae = assoc[i];
    os << "  {\"re\": " << fmt17(ae.E.real())
       << ", \"im\": " << fmt17(ae.E.imag()) << ", \"bc\": \""
       << (ae.bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann")
       << "\", \"im_omega2_E\": " << fmt17(ae.signed_im)
       << ", \"residual\": " << fmt17(ae.residual) << "}"
       << (i + 1 < assoc.size() ? ",\n" : "\n");
  }
  os << "]\n";
  write_text(cfg, os.str(), fallback);
  return kExitOk;
}

int run_asymptotics(const RunConfig& cfg, std::ostream& fallback) {
  const ResolvedProblem rp = resolve_problem(cfg);
  RaySpec ray;
  ray.rel_tol = effective_tol(cfg);
  ray.radius = cfg.radius;
  FindOptions fo;
  fo.parallel = cfg.parallel;
  const FindReport rep =
      find_eigenvalues(rp.spec, cfg.count, cfg.window, ray, fo);
  std::ostringstream os;
  os << "k,re_lambda,im_lambda,asymptotic,ratio\n";
  for (const Eigenvalue& ev : rep.eigenvalues) {
    const double asym = asymptotic_eigenvalue(rp.spec.m, ev.index);
    os << ev.index << ',' << fmt17(ev.lambda.real()) << ','
       << fmt17(ev.lambda.imag()) << ',' << fmt17(asym) << ','
       << fmt17(ev.lambda.real() / asym) << '\n';
  }
  write_text(cfg, os.str(), fallback);
  return rep.complete ? kExitOk : kExitIncomplete;
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidSpecError(std::string("config parse error: ") + e.what());
  }
  RunConfig cfg;
  const std::string cmd = j.value("command", "spectrum");
  if (cmd == "spectrum") cfg.command = Command::Spectrum;
  else if (cmd == "determinant-grid") cfg.command = Command::DeterminantGrid;
  else if (cmd == "sweep") cfg.command = Command::Sweep;
  else if (cmd == "check") cfg.command = Command::Check;
  else if (cmd == "associated") cfg.command = Command::Associated;
  else if (cmd == "asymptotics") cfg.command = Command::Asymptotics;
  else throw InvalidSpecError("unknown command: " + cmd);

  cfg.m = j.value("m", 0);
  if (j.contains("a")) cfg.a = j["a"].get<std::vector<double>>();
  if (j.contains("cubic")) {
    const auto v = j["cubic"].get<std::vector<double>>();
    if (v.size() != 3) throw InvalidSpecError("cubic needs 3 values");
    cfg.cubic = std::array<double, 3>{v[0], v[1], v[2]};
  }
  cfg.count = j.value("count", cfg.count);
  cfg.tol = j.value("tol", cfg.tol);
  cfg.radius = j.value("radius", cfg.radius);
  if (j.contains("window")) {
    const auto& w = j["window"];
    cfg.window = Window{w.value("re0", 0.0), w.value("re1", 0.0),
                        w.value("im0", 0.0), w.value("im1", 0.0)};
  }
  if (j.contains("grid")) {
    const auto g = j["grid"].get<std::vector<int>>();
    if (g.size() != 2) throw InvalidSpecError("grid needs [nx, ny]");
    cfg.grid_nx = g[0];
    cfg.grid_ny = g[1];
  }
  cfg.steps = j.value("steps", cfg.steps);
  if (j.contains("range")) {
    const auto r = j["range"].get<std::vector<double>>();
    if (r.size() != 2) throw InvalidSpecError("range needs [lo, hi]");
    cfg.range_lo = r[0];
    cfg.range_hi = r[1];
  }
  cfg.coeff_index = j.value("coeff", cfg.coeff_index);
  if (j.contains("bc")) {
    const std::string bc = j["bc"].get<std::string>();
    if (bc == "dirichlet") cfg.bc = BoundaryCondition::Dirichlet;
    else if (bc == "neumann") cfg.bc = BoundaryCondition::Neumann;
    else throw InvalidSpecError("bc must be dirichlet or neumann");
  }
  cfg.parallel = j.value("parallel", cfg.parallel);
  cfg.warm_start = j.value("warmStart", cfg.warm_start);
  cfg.out = j.value("out", cfg.out);
  return cfg;
}

int run(const RunConfig& config, std::ostream& fallback_out) {
  try {
    switch (config.command) {
      case Command::Spectrum: return run_spectrum(config, fallback_out);
      case Command::DeterminantGrid: return run_grid(config, fallback_out);
      case Command::Sweep: return run_sweep(config, fallback_out);
      case Command::Check: return run_check(config, fallback_out);
      case Command::Associated: return run_associated(config, fallback_out);
      case Command::Asymptotics: return run_asymptotics(config, fallback_out);
    }
    return kExitBadConfig;
  } catch (const InvalidSpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const ConvergenceError& e) {
    write_text(config,
               std::string("{\"incomplete\": true, \"error\": \"") + e.what() +
                   "\"}\n",
               fallback_out);
    return kExitIncomplete;
  }
}

}  // namespace ptspec
