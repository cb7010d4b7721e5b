#pragma once

#include <functional>
#include <optional>
#include <span>

#include "ptspec/potential.hpp"

namespace ptspec {

// Integration ray, in the frame of the equation being integrated
// (for f_k that is the rotated-coefficient equation, so angle 0 is the
// center of the image of S_k). radius == 0 requests auto-sizing.
struct RaySpec {
  double angle = 0.0;
  double radius = 0.0;
  double rel_tol = 1e-10;
  int max_steps = 400000;
};

// ODE state on the ray, rescaled so max(|v|,|dv|) stays in [1e-2, 1e2];
// the removed factor accumulates in log_scale: true value = v exp(log_scale).
struct BoundaryFrame {
  cplx v{0.0, 0.0};
  cplx dv{0.0, 0.0};
  cplx log_scale{0.0, 0.0};

  double mag() const;
  void renormalize();
};

// f and f' of the rotated problem at z = 0.
// value = f(0, G^k(a), omega^{-mk} lambda), derivative = f'(0, ...);
// the derivative of f_k itself is omega^{-k} * derivative (chain rule).
struct OriginData {
  cplx value{0.0, 0.0};
  cplx derivative{0.0, 0.0};
  cplx log_scale{0.0, 0.0};
  int k = 0;
  cplx lambda{0.0, 0.0};
  double radius_used = 0.0;

  // f_k'(0) in the same stored scale as value.
  cplx fk_prime(int m) const;
};

using StepObserver =
    std::function<void(cplx z, std::span<const BoundaryFrame> frames)>;

// Smallest radius with Re F >= 25 on the ray, outside the coefficient
// root bound, and small enough seed-series truncation error.
double resolve_radius(std::span<const cplx> coeffs, int m, cplx lambda,
                      double angle, double seed_tol = 1e-10);

// Asymptotic seed at z0 = radius * e^{i angle}:
//   f ~ z^r e^{-F_J(z)} sum_p d_p z^{-p/2}
// with the exponent series F_J extended well past the leading terms
// and the d_p from the term-by-term ODE recursion. Throws SectorError for
// |angle| >= 3 pi/(m+2) and SeedRadiusError when the series cannot reach
// seed_tol at this radius.
BoundaryFrame wkb_seed(std::span<const cplx> coeffs, int m, cplx lambda,
                       cplx z0, double seed_tol = 1e-10);
BoundaryFrame wkb_seed(const PotentialSpec& spec, cplx lambda, cplx z0,
                       double seed_tol = 1e-10);
BoundaryFrame wkb_seed(const RotatedSpec& spec, cplx lambda, cplx z0,
                       double seed_tol = 1e-10);

// Adaptive 5(4) propagation of one or more frames of the same equation
// from radius * e^{i angle} down to |z| = stop_radius (default: the
// origin). Frames renormalize on a shared schedule so stored pairwise
// Wronskians stay meaningful.
BoundaryFrame propagate_inward(const BoundaryFrame& frame,
                               std::span<const cplx> coeffs, int m,
                               cplx lambda, const RaySpec& ray,
                               const StepObserver& observer = nullptr,
                               double stop_radius = 0.0);
BoundaryFrame propagate_inward(const BoundaryFrame& frame,
                               const PotentialSpec& spec, cplx lambda,
                               const RaySpec& ray,
                               const StepObserver& observer = nullptr,
                               double stop_radius = 0.0);
std::vector<BoundaryFrame> propagate_frames(
    std::span<const BoundaryFrame> frames, std::span<const cplx> coeffs, int m,
    cplx lambda, const RaySpec& ray, const StepObserver& observer = nullptr,
    double stop_radius = 0.0);

// Seed + propagate for the plain (unrotated) coefficient vector: returns
// f(0, coeffs, lambda) and f'(0, coeffs, lambda) in stored scale.
OriginData compute_f_origin(std::span<const cplx> coeffs, int m, cplx lambda,
                            const RaySpec& ray);

// f_k(0) and f'(0, G^k(a), omega^{-mk} lambda) by shooting the rotated
// equation along the ray. Errors from propagation are tagged with k.
OriginData origin_data(const PotentialSpec& spec, cplx lambda, int k,
                       const RaySpec& ray);

}  // namespace ptspec
