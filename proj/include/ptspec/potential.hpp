#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ptspec {

using cplx = std::complex<double>;

// Problem instance for -u'' - [(iz)^m + P(iz)] u = lambda u with
// P(z) = a_1 z^{m-1} + ... + a_{m-1} z, all a_k real.
struct PotentialSpec {
  int m = 0;
  std::vector<double> a;  // a_1 ... a_{m-1}

  PotentialSpec() = default;
  PotentialSpec(int degree, std::vector<double> coeffs);

  // Throws InvalidSpecError unless m >= 2, a.size() == m-1 and all finite.
  void validate() const;

  std::vector<cplx> complex_coeffs() const;
};

// Sector-rotated coefficient data G^k(a) with the lambda multiplier
// omega^{-mk}; coefficients may be complex.
struct RotatedSpec {
  int m = 0;
  std::vector<cplx> coeffs;  // omega^{-jk} a_j
  cplx lambda_factor{1.0, 0.0};
  int k = 0;
};

// omega = exp(2 pi i / (m+2)).
cplx omega(int m);

// omega^num with the exponent reduced mod (m+2) before calling polar, so
// products of rotations stay unit-modulus to near machine precision.
cplx unit_root(int m, long long num);

// G^k applied to an arbitrary complex coefficient vector.
std::vector<cplx> rotate_coeffs(std::span<const cplx> coeffs, int m, int k);

RotatedSpec rotate_frame(const PotentialSpec& spec, int k);
RotatedSpec rotate_frame(const RotatedSpec& spec, int k);

// Sign-convention bridge for the cubic family: the problem written as
// -u'' + (alpha i z^3 + beta z^2 + gamma i z) u = lambda u maps, after
// rescaling z by alpha^{-1/5}, to the m = 3 spec a = (beta', -gamma').
// Eigenvalues of the original problem are lambda_scale times the mapped
// problem's eigenvalues.
// Requires alpha > 0.
struct CubicBridge {
  PotentialSpec spec;
  double lambda_scale = 1.0;
};
CubicBridge cubic_bridge(double alpha, double beta, double gamma);

}  // namespace ptspec
