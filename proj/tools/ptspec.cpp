#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ptspec/errors.hpp"
#include "ptspec/runconfig.hpp"

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

void add_common(CLI::App* sub, ptspec::RunConfig& cfg, std::string& a_str,
                std::string& cubic_str, std::string& window_str) {
  sub->add_option("--m", cfg.m, "polynomial degree m >= 2");
  sub->add_option("--a", a_str, "coefficients a_1,...,a_{m-1} (comma list)");
  sub->add_option("--cubic", cubic_str,
                  "alpha,beta,gamma for the cubic alpha iz^3+beta z^2+gamma iz"
                  " (sign bridge a = (beta', -gamma'), alpha > 0)");
  sub->add_option("--count", cfg.count, "number of eigenvalues");
  sub->add_option("--tol", cfg.tol,
                  "relative tolerance (default 1e-10 or PT_SPECTRAL_TOL)");
  sub->add_option("--radius", cfg.radius, "seed radius (0 = auto)");
  sub->add_option("--window", window_str, "search window re0:re1:im0:im1");
  sub->add_option("--out", cfg.out, "output path (default stdout)");
  sub->add_flag("--no-parallel", [&cfg](size_t) { cfg.parallel = false; },
                "disable OpenMP parallel kernels");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ptspec: eigenvalues of PT-symmetric polynomial oscillators by "
      "complex-ray shooting"};
  app.require_subcommand(0, 1);

  ptspec::RunConfig cfg;
  std::string a_str, cubic_str, window_str, grid_str, range_str, bc_str,
      config_path;
  app.add_option("--config", config_path,
                 "JSON document mirroring the full run configuration");

  auto* spectrum = app.add_subcommand("spectrum", "locate eigenvalues");
  auto* grid = app.add_subcommand("determinant-grid",
                                  "eigencondition over a lambda grid (CSV)");
  auto* sweep = app.add_subcommand("sweep", "coefficient sweep trajectories");
  auto* check = app.add_subcommand("check", "hypothesis checker verdicts");
  auto* assoc = app.add_subcommand("associated",
                                   "associated half-line spectrum");
  auto* asym = app.add_subcommand("asymptotics",
                                  "computed vs asymptotic eigenvalues");
  for (CLI::App* sub : {spectrum, grid, sweep, check, assoc, asym})
    add_common(sub, cfg, a_str, cubic_str, window_str);
  grid->add_option("--grid", grid_str, "grid resolution nx,ny");
  sweep->add_option("--coeff", cfg.coeff_index, "coefficient index 1..m-1");
  sweep->add_option("--range", range_str, "sweep range lo:hi");
  sweep->add_option("--steps", cfg.steps, "number of grid steps");
  sweep->add_flag("--no-warm-start",
                  [&cfg](size_t) { cfg.warm_start = false; },
                  "independent (parallelizable) sweep steps");
  assoc->add_option("--bc", bc_str, "dirichlet or neumann");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) {
        std::cerr << "error: cannot read config file\n";
        return ptspec::kExitBadConfig;
      }
      std::stringstream ss;
      ss << f.rdbuf();
      cfg = ptspec::parse_config_json(ss.str());
    }
    if (spectrum->parsed()) cfg.command = ptspec::Command::Spectrum;
    if (grid->parsed()) cfg.command = ptspec::Command::DeterminantGrid;
    if (sweep->parsed()) {
      cfg.command = ptspec::Command::Sweep;
      // default to tracking the lowest pair, where coalescence happens
      if (sweep->count("--count") == 0 && config_path.empty()) cfg.count = 2;
    }
    if (check->parsed()) cfg.command = ptspec::Command::Check;
    if (assoc->parsed()) cfg.command = ptspec::Command::Associated;
    if (asym->parsed()) cfg.command = ptspec::Command::Asymptotics;

    if (!a_str.empty()) cfg.a = parse_list(a_str);
    if (!cubic_str.empty()) {
      const auto v = parse_list(cubic_str);
      if (v.size() != 3) throw ptspec::InvalidSpecError("--cubic needs 3 values");
      cfg.cubic = std::array<double, 3>{v[0], v[1], v[2]};
    }
    if (!window_str.empty()) {
      std::vector<double> w;
      std::stringstream ss(window_str);
      std::string item;
      while (std::getline(ss, item, ':')) w.push_back(std::stod(item));
      if (w.size() != 4)
        throw ptspec::InvalidSpecError("--window needs re0:re1:im0:im1");
      cfg.window = ptspec::Window{w[0], w[1], w[2], w[3]};
    }
    if (!grid_str.empty()) {
      const auto g = parse_list(grid_str);
      if (g.size() != 2) throw ptspec::InvalidSpecError("--grid needs nx,ny");
      cfg.grid_nx = static_cast<int>(g[0]);
      cfg.grid_ny = static_cast<int>(g[1]);
    }
    if (!range_str.empty()) {
      std::vector<double> r;
      std::stringstream ss(range_str);
      std::string item;
      while (std::getline(ss, item, ':')) r.push_back(std::stod(item));
      if (r.size() != 2) throw ptspec::InvalidSpecError("--range needs lo:hi");
      cfg.range_lo = r[0];
      cfg.range_hi = r[1];
    }
    if (!bc_str.empty()) {
      if (bc_str == "dirichlet") cfg.bc = ptspec::BoundaryCondition::Dirichlet;
      else if (bc_str == "neumann") cfg.bc = ptspec::BoundaryCondition::Neumann;
      else throw ptspec::InvalidSpecError("--bc must be dirichlet or neumann");
    }
    return ptspec::run(cfg, std::cout);
  } catch (const ptspec::InvalidSpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ptspec::kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ptspec::kExitBadConfig;
  }
}
