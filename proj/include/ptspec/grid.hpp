#pragma once

#include "ptspec/potential.hpp"
#include "ptspec/ray.hpp"

namespace ptspec {

struct GridSpec {
  double re0 = 0.0, re1 = 1.0;
  double im0 = -1.0, im1 = 1.0;
  int nx = 2, ny = 2;
};

struct GridPoint {
  cplx lambda{0.0, 0.0};
  cplx M{0.0, 0.0};
  double log_abs_M = 0.0;
};

// Eigencondition sampled over a rectangular lambda grid, row-major with
// the imaginary axis outer. The radius is frozen across the grid so the
// sampled function is continuous. Points are independent; the parallel
// kernel writes per-index slots and is bit-identical to the serial one.
std::vector<GridPoint> evaluate_grid(const PotentialSpec& spec,
                                     const GridSpec& grid, const RaySpec& ray,
                                     bool parallel);

}  // namespace ptspec
