#pragma once

#include "ptspec/eigensolve.hpp"

namespace ptspec {

// Two real trajectories merged and re-emerged as a conjugate pair
// somewhere inside (param_lo, param_hi).
struct CoalescenceEvent {
  double param_lo = 0.0;
  double param_hi = 0.0;
  int traj_a = -1;
  int traj_b = -1;
  bool ambiguous = false;
};

struct Trajectory {
  int start_step = 0;
  std::vector<cplx> values;
  std::vector<Classification> classes;
};

struct SweepResult {
  std::vector<double> parameter_values;
  std::vector<Trajectory> trajectories;
  std::vector<CoalescenceEvent> events;
};

struct SweepOptions {
  // Warm-start each step from the previous roots (sequential); turning it
  // off makes steps independent so they may run in parallel.
  bool warm_start = true;
  bool parallel = false;
  RaySpec ray{};
};

// Runs find_eigenvalues at each grid value of a_{coeff_index} over
// [range_lo, range_hi], continues trajectories by nearest-neighbor
// matching and records coalescence events.
SweepResult sweep_coefficient(const PotentialSpec& spec, int coeff_index,
                              double range_lo, double range_hi, int steps,
                              int count, const SweepOptions& opts = {});

}  // namespace ptspec
