#include "ptspec/stokes.hpp"

#include <cmath>
#include <string>

#include "ptspec/errors.hpp"

namespace ptspec {

namespace {

// Stored-scale Wronskian v_j (w^{-k} dv_k) - (w^{-j} dv_j) v_k; the true
// W_{j,k} is this times exp(sigma_j + sigma_k).
cplx stored_wronskian(const OriginData& dj, const OriginData& dk, int m) {
  return dj.value * dk.fk_prime(m) - dj.fk_prime(m) * dk.value;
}

cplx guarded_exp(cplx s) {
  if (std::abs(s.real()) > 700.0)
    throw Error("log-scale difference overflows exp; radii inconsistent");
  return std::exp(s);
}

double frame_mag(const OriginData& d) {
  return std::max(std::abs(d.value), std::abs(d.derivative));
}

}  // namespace

StokesData stokes_multipliers(const PotentialSpec& spec, cplx lambda,
                              const RaySpec& ray) {
  spec.validate();
  const OriginData dm1 = origin_data(spec, lambda, -1, ray);
  const OriginData d0 = origin_data(spec, lambda, 0, ray);
  const OriginData dp1 = origin_data(spec, lambda, 1, ray);

  const cplx w01 = stored_wronskian(d0, dp1, spec.m);
  const double noise_floor =
      1e3 * ray.rel_tol * frame_mag(d0) * frame_mag(dp1);
  if (std::abs(w01) < noise_floor)
    throw DegenerateWronskianError(
        "W_{0,1} below the noise floor (" + std::to_string(std::abs(w01)) +
        "): numerics failure, W_{k,k+1} never vanishes");

  const cplx wm11 = stored_wronskian(dm1, dp1, spec.m);
  const cplx wm10 = stored_wronskian(dm1, d0, spec.m);

  StokesData sd;
  sd.sigma_m1 = dm1.log_scale;
  sd.sigma_0 = d0.log_scale;
  sd.sigma_p1 = dp1.log_scale;
  sd.C = wm11 / w01 * guarded_exp(dm1.log_scale - d0.log_scale);
  sd.Ctilde = -wm10 / w01 * guarded_exp(dm1.log_scale - dp1.log_scale);
  sd.phi0 = std::arg(sd.Ctilde);
  return sd;
}

namespace detail {

EigenPoint eigen_point(const PotentialSpec& spec, cplx lambda,
                       const RaySpec& ray) {
  const OriginData dm1 = origin_data(spec, lambda, -1, ray);
  const OriginData dp1 = origin_data(spec, lambda, 1, ray);
  const double mag_m1 = frame_mag(dm1);
  const double mag_p1 = frame_mag(dp1);

  EigenPoint pt;
  const cplx what = stored_wronskian(dm1, dp1, spec.m) / (mag_m1 * mag_p1);
  pt.w_phase =
      what * std::polar(1.0, (dm1.log_scale + dp1.log_scale).imag());

  const bool healthy_m1 = std::abs(dm1.value) >= 1e-3 * mag_m1;
  const bool healthy_p1 = std::abs(dp1.value) >= 1e-3 * mag_p1;
  if (healthy_m1 && healthy_p1) {
    const cplx x_m1 = dm1.fk_prime(spec.m) / dm1.value;
    const cplx x_p1 = dp1.fk_prime(spec.m) / dp1.value;
    pt.M = x_m1 - x_p1;
    pt.residual = std::abs(pt.M) / (1.0 + std::abs(x_m1) + std::abs(x_p1));
  } else {
    if (std::abs(dm1.derivative) < 1e-3 * mag_m1 &&
        std::abs(dm1.value) < 1e-3 * mag_m1)
      throw EvaluationError("f and f' both vanish at z = 0");
    pt.wronskian_form = true;
    pt.M = what;
    pt.residual = std::abs(what);
  }
  return pt;
}

double real_line_detector(const PotentialSpec& spec, double lambda,
                          const RaySpec& ray) {
  // For real a, f_{-1}(0) = conj(f_1(0)) on the real lambda axis, so
  // W_{-1,1} = 2i Im(conj(f_1) f_1') up to a positive factor: one
  // propagation gives a pole-free sign function for real eigenvalues.
  const OriginData dp1 = origin_data(spec, cplx{lambda, 0.0}, 1, ray);
  const cplx prod = dp1.fk_prime(spec.m) * std::conj(dp1.value);
  const double nrm = std::norm(dp1.value) + std::norm(dp1.derivative);
  return prod.imag() / nrm;
}

}  // namespace detail

cplx eigencondition(const PotentialSpec& spec, cplx lambda,
                    const RaySpec& ray) {
  return detail::eigen_point(spec, lambda, ray).M;
}

}  // namespace ptspec
