#pragma once

#include <optional>
#include <string>

#include "ptspec/potential.hpp"
#include "ptspec/ray.hpp"

namespace ptspec {

enum class Classification { Real, ComplexPairMember };

struct Eigenvalue {
  cplx lambda{0.0, 0.0};
  int index = 0;  // position in the Re-ordered list
  double residual = 0.0;
  Classification classification = Classification::Real;
  double radius_used = 0.0;
};

struct Window {
  double re0 = 0.0, re1 = 0.0, im0 = 0.0, im1 = 0.0;
  bool contains(cplx z) const {
    return z.real() >= re0 && z.real() <= re1 && z.imag() >= im0 &&
           z.imag() <= im1;
  }
};

// |Im lambda| < realityTol * max(1,|lambda|) classifies Real.
inline constexpr double kRealityTol = 1e-6;
inline constexpr double kResidualThreshold = 1e-8;

struct FindOptions {
  // Also confirm each root at 1.5x the radius (|dlambda| < 1e-6 max(1,|l|)).
  bool verify_radius = true;
  // Force the shooting path even for m = 2 (default: analytic formula).
  bool force_shooting = false;
  // Warm-start seeds from a previous, nearby computation.
  std::vector<cplx> seeds;
  // Evaluate scan grids in parallel (deterministic either way).
  bool parallel = true;
};

struct FindReport {
  std::vector<Eigenvalue> eigenvalues;  // the `count` lowest by Re
  std::vector<cplx> all_roots;          // every verified root in the window
  int window_count = -1;   // argument-principle count over the window
  int refined_count = 0;   // all roots located in the window
  bool complete = true;
  double radius_used = 0.0;
  std::vector<std::string> diagnostics;
};

// Locates the `count` lowest eigenvalues (by Re) inside the window
// (default window auto-sized from the asymptotic law). Real roots come
// from sign changes of the real-line detector; complex roots from
// argument-principle box counting refined by secant/Muller. Every
// returned root passes the residual, simplicity and (optionally)
// radius-growth checks; failures are reported, not silently dropped.
FindReport find_eigenvalues(const PotentialSpec& spec, int count,
                            std::optional<Window> window = std::nullopt,
                            const RaySpec& ray = {},
                            const FindOptions& opts = {});

enum class BoundaryCondition { Dirichlet, Neumann };

// Eigenvalue E of the associated half-line problem
//   -v'' + [z^m + sum_k a_k omega^k z^{m-k}] v = -E v
// with v(0) = 0 (Dirichlet) or v'(0) = 0 (Neumann): zeros of
// f(0, G^{-1}(a), E) resp. f'(0, G^{-1}(a), E).
struct AssociatedEigenvalue {
  cplx E{0.0, 0.0};
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  double signed_im = 0.0;  // Im(omega^2 E)
  double residual = 0.0;
};

// First `count` associated eigenvalues ordered by increasing |E|, found
// by winding/box search along the negative real axis.
std::vector<AssociatedEigenvalue> associated_spectrum(
    const PotentialSpec& spec, BoundaryCondition bc, int count,
    const RaySpec& ray = {});

// |log prod_{j<=truncation} |(omega^2 E_j - lambda)/(omega^2 E_j - conj l)||
// -- a truncated diagnostic of the product identity, not a gate.
double product_residual(cplx lambda, int m,
                        std::span<const AssociatedEigenvalue> associated,
                        int truncation);

namespace rootdetail {

// Bracketed scalar root by Brent's method.
double brent(const std::function<double(double)>& f, double a, double b,
             double fa, double fb, double xtol, int max_iter = 128);

// Complex secant iteration; returns nullopt on stagnation/divergence.
std::optional<cplx> secant(const std::function<cplx(cplx)>& f, cplx x0,
                           cplx x1, double xtol, int max_iter = 50);

// Muller's method (three-point), for stubborn complex roots.
std::optional<cplx> muller(const std::function<cplx(cplx)>& f, cplx x0,
                           cplx x1, cplx x2, double xtol, int max_iter = 50);

// Winding number of f around the rectangle boundary, by adaptive phase
// tracking. f must be continuous and zero-free on the contour.
int winding_number(const std::function<cplx(cplx)>& f, const Window& box,
                   int initial_per_edge = 24);

}  // namespace rootdetail

}  // namespace ptspec
