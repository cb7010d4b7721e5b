#pragma once

#include "ptspec/potential.hpp"
#include "ptspec/ray.hpp"

namespace ptspec {

// Stokes multipliers of f_{-1} with respect to f_0 and f_1:
//   C = W_{-1,1}/W_{0,1},  Ctilde = -W_{-1,0}/W_{0,1},
// with W_{j,k} = f_j f_k' - f_j' f_k evaluated at z = 0.
struct StokesData {
  cplx C{0.0, 0.0};
  cplx Ctilde{0.0, 0.0};
  double phi0 = 0.0;  // arg Ctilde
  // log scales of the three origin propagations entering the Wronskians.
  cplx sigma_m1{0.0, 0.0};
  cplx sigma_0{0.0, 0.0};
  cplx sigma_p1{0.0, 0.0};
};

StokesData stokes_multipliers(const PotentialSpec& spec, cplx lambda,
                              const RaySpec& ray);

// Normalized eigencondition whose zeros are exactly the zeros of C(a,.),
// i.e. the eigenvalues: the log-derivative mismatch
//   M(lambda) = f_{-1}'(0)/f_{-1}(0) - f_1'(0)/f_1(0)
// when both origin values are healthy, else the scale-normalized
// Wronskian W_{-1,1}.
cplx eigencondition(const PotentialSpec& spec, cplx lambda,
                    const RaySpec& ray);

namespace detail {

// Everything the root machinery wants from one lambda evaluation.
struct EigenPoint {
  cplx M{0.0, 0.0};        // mismatch (or normalized Wronskian fallback)
  bool wronskian_form = false;
  double residual = 0.0;   // |M| / (1 + |X_{-1}| + |X_1|), scale-free
  // Phase-corrected stored Wronskian: entire in lambda up to a positive
  // real factor, so its winding counts eigenvalues.
  cplx w_phase{0.0, 0.0};
};

EigenPoint eigen_point(const PotentialSpec& spec, cplx lambda,
                       const RaySpec& ray);

// Real-line sign detector for real a: Im(conj(f_1(0)) f_1'(0)) normalized;
// vanishes on the real axis exactly at real eigenvalues and has no poles.
// One propagation per evaluation.
double real_line_detector(const PotentialSpec& spec, double lambda,
                          const RaySpec& ray);

}  // namespace detail

}  // namespace ptspec
