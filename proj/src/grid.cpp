#include "ptspec/grid.hpp"

#include <cmath>

#include "ptspec/errors.hpp"
#include "ptspec/parallel.hpp"
#include "ptspec/stokes.hpp"

namespace ptspec {

std::vector<GridPoint> evaluate_grid(const PotentialSpec& spec,
                                     const GridSpec& grid, const RaySpec& ray,
                                     bool parallel) {
  spec.validate();
  if (grid.nx < 2 || grid.ny < 2)
    throw InvalidSpecError("grid needs at least 2x2 points");

  RaySpec eff = ray;
  if (eff.radius <= 0.0) {
    const double far_mag =
        std::max({std::abs(grid.re0), std::abs(grid.re1), std::abs(grid.im0),
                  std::abs(grid.im1)});
    const cplx lam_far{far_mag, 0.5 * far_mag};
    double R = 0.0;
    for (int k : {-1, 1}) {
      const RotatedSpec rot = rotate_frame(spec, k);
      R = std::max(R, resolve_radius(rot.coeffs, spec.m,
                                     rot.lambda_factor * lam_far, eff.angle,
                                     std::max(1e-12, 0.1 * eff.rel_tol)));
    }
    eff.radius = R;
  }

  const int n = grid.nx * grid.ny;
  std::vector<GridPoint> out(static_cast<size_t>(n));
  parallel_for(n, parallel, [&](int idx) {
    const int iy = idx / grid.nx;
    const int ix = idx % grid.nx;
    const double re =
        grid.re0 + (grid.re1 - grid.re0) * ix / (grid.nx - 1);
    const double im =
        grid.im0 + (grid.im1 - grid.im0) * iy / (grid.ny - 1);
    GridPoint& pt = out[static_cast<size_t>(idx)];
    pt.lambda = cplx{re, im};
    pt.M = eigencondition(spec, pt.lambda, eff);
    pt.log_abs_M = std::log(std::abs(pt.M));
  });
  return out;
}

}  // namespace ptspec
