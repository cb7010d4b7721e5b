#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ptspec/eigensolve.hpp"
#include "ptspec/grid.hpp"

namespace ptspec {

enum class Command {
  Spectrum,
  DeterminantGrid,
  Sweep,
  Check,
  Associated,
  Asymptotics,
};

// One structure mirrors both the CLI flags and the --config JSON document.
struct RunConfig {
  Command command = Command::Spectrum;
  int m = 0;
  std::vector<double> a;
  // --cubic alpha,beta,gamma alternative input (applies the sign bridge).
  std::optional<std::array<double, 3>> cubic;

  int count = 8;
  double tol = 0.0;      // 0 = default / PT_SPECTRAL_TOL
  double radius = 0.0;   // 0 = auto
  std::optional<Window> window;
  int grid_nx = 81, grid_ny = 41;
  int steps = 41;
  double range_lo = 0.0, range_hi = 1.0;
  int coeff_index = 1;
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  bool parallel = true;
  bool warm_start = true;

  std::string out;  // empty = stdout
};

// Exit codes: 0 success (check: ProvedPositiveReal), 10/20 check verdicts,
// 2 invalid config, 3 solver non-convergence (partial output flagged).
inline constexpr int kExitOk = 0;
inline constexpr int kExitProvedRealGivenReal = 10;
inline constexpr int kExitUnknown = 20;
inline constexpr int kExitBadConfig = 2;
inline constexpr int kExitIncomplete = 3;

// Parse a JSON document mirroring RunConfig. Throws InvalidSpecError.
RunConfig parse_config_json(const std::string& text);

// Executes the subcommand; writes results to config.out or `fallback_out`.
int run(const RunConfig& config, std::ostream& fallback_out);

// 17-significant-digit float formatting shared by every writer.
std::string fmt17(double x);

}  // namespace ptspec
