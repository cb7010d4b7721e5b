#include "ptspec/potential.hpp"

#include <cmath>
#include <numbers>

#include "ptspec/errors.hpp"

namespace ptspec {

PotentialSpec::PotentialSpec(int degree, std::vector<double> coeffs)
    : m(degree), a(std::move(coeffs)) {
  validate();
}

void PotentialSpec::validate() const {
  if (m < 2) throw InvalidSpecError("potential degree m must be >= 2");
  if (a.size() != static_cast<size_t>(m - 1))
    throw InvalidSpecError("coefficient vector must have length m-1");
  for (double ak : a)
    if (!std::isfinite(ak))
      throw InvalidSpecError("coefficients must be finite");
}

std::vector<cplx> PotentialSpec::complex_coeffs() const {
  return std::vector<cplx>(a.begin(), a.end());
}

cplx omega(int m) { return unit_root(m, 1); }

cplx unit_root(int m, long long num) {
  const long long n = m + 2;
  long long r = num % n;
  if (r < 0) r += n;
  if (r == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) /
                             static_cast<double>(n));
}

std::vector<cplx> rotate_coeffs(std::span<const cplx> coeffs, int m, int k) {
  std::vector<cplx> out(coeffs.size());
  for (size_t j = 0; j < coeffs.size(); ++j)
    out[j] = unit_root(m, -static_cast<long long>(j + 1) * k) * coeffs[j];
  return out;
}

RotatedSpec rotate_frame(const PotentialSpec& spec, int k) {
  spec.validate();
  const auto base = spec.complex_coeffs();
  RotatedSpec rot;
  rot.m = spec.m;
  rot.coeffs = rotate_coeffs(base, spec.m, k);
  rot.lambda_factor = unit_root(spec.m, -static_cast<long long>(spec.m) * k);
  rot.k = k;
  return rot;
}

RotatedSpec rotate_frame(const RotatedSpec& spec, int k) {
  RotatedSpec rot;
  rot.m = spec.m;
  rot.coeffs = rotate_coeffs(spec.coeffs, spec.m, k);
  rot.lambda_factor =
      spec.lambda_factor *
      unit_root(spec.m, -static_cast<long long>(spec.m) * k);
  rot.k = spec.k + k;
  return rot;
}

CubicBridge cubic_bridge(double alpha, double beta, double gamma) {
  if (!(alpha > 0.0))
    throw InvalidSpecError("cubic bridge requires alpha > 0");
  // z -> alpha^{-1/5} z normalizes the leading coefficient; the remaining
  // coefficients and the eigenvalue pick up the matching powers.
  const double c = std::pow(alpha, -0.2);
  const double beta_s = beta * std::pow(c, 4.0);
  const double gamma_s = gamma * std::pow(c, 3.0);
  CubicBridge bridge;
  bridge.spec = PotentialSpec(3, {beta_s, -gamma_s});
  bridge.lambda_scale = 1.0 / (c * c);
  return bridge;
}

}  // namespace ptspec
