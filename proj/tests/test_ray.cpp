#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ptspec/errors.hpp"
#include "ptspec/ray.hpp"
#include "ptspec/series.hpp"

using namespace ptspec;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("wkb_seed reproduces the bare asymptotic form at a = 0") {
  // f = R^{-3/4} exp(-(2/5) R^{5/2}) for m = 3, a = 0, lambda = 0;
  // compare in log space, the value itself underflows at this radius.
  std::vector<cplx> a(2, cplx{0.0, 0.0});
  const double R = 100.0;
  const BoundaryFrame seed = wkb_seed(a, 3, 0.0, cplx{R, 0.0}, 1e-8);
  const cplx logf = std::log(seed.v) + seed.log_scale;
  const double expected = -0.75 * std::log(R) - 0.4 * std::pow(R, 2.5);
  CHECK(std::abs(logf.real() - expected) < 1e-5);
  CHECK(std::abs(logf.imag()) < 1e-10);

  // dv/v ~ -z^{m/2} at large R
  const cplx ratio = seed.dv / seed.v;
  CHECK(std::abs(ratio + std::pow(R, 1.5)) / std::pow(R, 1.5) < 1e-3);
}

TEST_CASE("wkb_seed sector and radius validation") {
  std::vector<cplx> a(2, cplx{0.0, 0.0});
  CHECK_THROWS_AS(wkb_seed(a, 3, 0.0, std::polar(40.0, 0.99 * kPi), 1e-8),
                  SectorError);
  // inside the asymptotic sector but where Re F < 0: invalid ray spec
  CHECK_THROWS_AS(wkb_seed(a, 3, 0.0, std::polar(40.0, 0.55 * kPi), 1e-8),
                  SeedRadiusError);
  CHECK_THROWS_AS(wkb_seed(a, 3, 0.0, cplx{1.2, 0.0}, 1e-8), SeedRadiusError);
}

TEST_CASE("seeding at R then propagating to R' matches seeding at R'") {
  const std::vector<cplx> a{cplx{1.0, 0.0}, cplx{-0.5, 0.0}};
  const cplx lambda{2.3, 0.7};
  const double R = 25.0, Rp = 16.0;
  RaySpec ray;
  ray.radius = R;
  const BoundaryFrame seed = wkb_seed(a, 3, lambda, cplx{R, 0.0}, 1e-11);
  const BoundaryFrame at_rp =
      propagate_inward(seed, a, 3, lambda, ray, nullptr, Rp);
  const BoundaryFrame direct = wkb_seed(a, 3, lambda, cplx{Rp, 0.0}, 1e-11);
  const cplx log_prop = std::log(at_rp.v) + at_rp.log_scale;
  const cplx log_direct = std::log(direct.v) + direct.log_scale;
  CHECK(std::abs(log_prop - log_direct) < 1e-7);
  CHECK(std::abs(at_rp.dv / at_rp.v - direct.dv / direct.v) /
            std::abs(direct.dv / direct.v) <
        1e-8);
}

TEST_CASE("propagation: Abel Wronskian constancy along the ray") {
  // Two independent frames in the oscillatory region (Q = z^3 + ... + lambda
  // stays negative along the path), where neither solution dominates
  // exponentially and the Wronskian is numerically meaningful at each step.
  const std::vector<cplx> a{cplx{0.8, 0.0}, cplx{-1.2, 0.0}};
  const cplx lambda{-40.0, 0.5};
  RaySpec ray;
  ray.radius = 2.8;

  BoundaryFrame f1{cplx{1.0, 0.0}, cplx{0.0, 0.3}, cplx{0.0, 0.0}};
  BoundaryFrame f2{cplx{0.7, -0.2}, cplx{1.0, 0.0}, cplx{0.0, 0.0}};
  const cplx w0 = f1.v * f2.dv - f1.dv * f2.v;
  double worst = 0.0;
  int steps = 0;
  std::vector<BoundaryFrame> pair{f1, f2};
  propagate_frames(pair, a, 3, lambda, ray,
                   [&](cplx, std::span<const BoundaryFrame> fr) {
                     const cplx w = fr[0].v * fr[1].dv - fr[0].dv * fr[1].v;
                     const cplx adj =
                         w * std::exp(fr[0].log_scale + fr[1].log_scale);
                     worst =
                         std::max(worst, std::abs(adj - w0) / std::abs(w0));
                     ++steps;
                   });
  CHECK(steps > 10);
  CHECK(worst < 1e-9);  // Abel: constant to integration accuracy
}

TEST_CASE("propagation: stored magnitudes respect the renorm band") {
  std::vector<cplx> a(2, cplx{0.0, 0.0});
  RaySpec ray;
  ray.radius = resolve_radius(a, 3, 0.0, 0.0, 1e-11);
  const BoundaryFrame seed =
      wkb_seed(a, 3, 0.0, cplx{ray.radius, 0.0}, 1e-10);
  double max_mag = 0.0;
  bool renormalized = false;
  cplx prev_scale = seed.log_scale;
  propagate_inward(seed, a, 3, 0.0, ray,
                   [&](cplx, std::span<const BoundaryFrame> fr) {
                     max_mag = std::max(
                         max_mag,
                         std::max(std::abs(fr[0].v), std::abs(fr[0].dv)));
                     if (fr[0].log_scale != prev_scale) renormalized = true;
                     prev_scale = fr[0].log_scale;
                   });
  CHECK(renormalized);  // the run spans ~e^{100} of growth
  CHECK(max_mag < 100.0001);
}

TEST_CASE("propagation error paths") {
  const std::vector<cplx> a{cplx{0.0, 0.0}, cplx{0.0, 0.0}};
  RaySpec ray;
  ray.radius = 12.0;
  ray.max_steps = 5;
  const BoundaryFrame seed = wkb_seed(a, 3, 0.0, cplx{12.0, 0.0}, 1e-8);
  CHECK_THROWS_AS(propagate_inward(seed, a, 3, 0.0, ray), MaxStepsError);
  ray.max_steps = 400000;
  CHECK_THROWS_AS(propagate_inward(seed, a, 3, 0.0, ray, nullptr, 13.0),
                  InvalidSpecError);
}

TEST_CASE("hermite ground state: m=2, lambda=-1 has flat log-derivative") {
  std::vector<cplx> a(1, cplx{0.0, 0.0});
  RaySpec ray;
  const OriginData od = compute_f_origin(a, 2, cplx{-1.0, 0.0}, ray);
  CHECK(std::abs(od.derivative / od.value) < 1e-8);
}

TEST_CASE("parabolic cylinder oracle: m=2, lambda=1 ratio") {
  // f'(0)/f(0) = -2 Gamma(3/4 + lambda/4) / Gamma(1/4 + lambda/4)
  std::vector<cplx> a(1, cplx{0.0, 0.0});
  RaySpec ray;
  const OriginData od = compute_f_origin(a, 2, cplx{1.0, 0.0}, ray);
  const double expected =
      -2.0 * oracles::lanczos_gamma(1.0) / oracles::lanczos_gamma(0.5);
  CHECK(std::abs(od.derivative / od.value - expected) < 1e-9);
}

TEST_CASE("bessel closed form: f(0) and f'(0) for the pure power") {
  // -f'' + z^m f = 0: f(0) = Gamma(nu) (m+2)^nu / sqrt(pi (m+2)),
  // f'(0) = Gamma(-nu) (m+2)^{-nu} / sqrt(pi (m+2)), nu = 1/(m+2).
  RaySpec ray;
  for (int m : {3, 4, 5}) {
    std::vector<cplx> a(static_cast<size_t>(m - 1), cplx{0.0, 0.0});
    const OriginData od = compute_f_origin(a, m, 0.0, ray);
    const double nu = 1.0 / (m + 2);
    const double norm = std::sqrt(kPi * (m + 2));
    const double f0 =
        oracles::lanczos_gamma(nu) * std::pow(m + 2.0, nu) / norm;
    const double fp0 =
        oracles::lanczos_gamma(-nu) * std::pow(m + 2.0, -nu) / norm;
    const cplx got_f0 = od.value * std::exp(od.log_scale);
    const cplx got_fp0 = od.derivative * std::exp(od.log_scale);
    CHECK(std::abs(got_f0 - f0) / std::abs(f0) < 1e-7);
    CHECK(std::abs(got_fp0 - fp0) / std::abs(fp0) < 1e-7);
  }
}

TEST_CASE("origin_data: conjugation symmetry between k = +1 and k = -1") {
  const PotentialSpec spec(3, {1.3, -0.6});
  RaySpec ray;
  const cplx lambda{2.0, 1.5};
  const OriginData plus = origin_data(spec, lambda, 1, ray);
  const OriginData minus = origin_data(spec, std::conj(lambda), -1, ray);
  // f(0, G a, w^{-m} lambda) = conj(f(0, G^{-1} a, conj(w^{-m} lambda)))
  const cplx v_plus = plus.value * std::exp(plus.log_scale);
  const cplx v_minus = minus.value * std::exp(minus.log_scale);
  CHECK(std::abs(v_plus - std::conj(v_minus)) / std::abs(v_plus) < 1e-8);
  const cplx d_plus = plus.derivative * std::exp(plus.log_scale);
  const cplx d_minus = minus.derivative * std::exp(minus.log_scale);
  CHECK(std::abs(d_plus - std::conj(d_minus)) / std::abs(d_plus) < 1e-8);
}

TEST_CASE("PT symmetry: real data gives real origin values") {
  const PotentialSpec spec(4, {0.5, -1.0, 2.0});
  RaySpec ray;
  const OriginData od = origin_data(spec, cplx{3.7, 0.0}, 0, ray);
  CHECK(std::abs(od.log_scale.imag()) < 1e-8);
  CHECK(std::abs(od.value.imag()) / std::abs(od.value) < 1e-8);
  CHECK(std::abs(od.derivative.imag()) / std::abs(od.derivative) < 1e-8);
}

TEST_CASE("radius and ray robustness of origin ratios") {
  const PotentialSpec spec(3, {1.0, 1.0});
  const cplx lambda{4.0, 0.0};
  RaySpec base;
  const OriginData ref = origin_data(spec, lambda, 1, base);
  const cplx ref_ratio = ref.derivative / ref.value;

  RaySpec grown;
  grown.radius = 1.5 * ref.radius_used;
  const OriginData od2 = origin_data(spec, lambda, 1, grown);
  CHECK(std::abs(od2.derivative / od2.value - ref_ratio) /
            std::abs(ref_ratio) <
        1e-8);

  for (double frac : {0.5, -0.5}) {
    RaySpec tilted;
    tilted.angle = frac * kPi / (spec.m + 2);
    const OriginData od3 = origin_data(spec, lambda, 1, tilted);
    CHECK(std::abs(od3.derivative / od3.value - ref_ratio) /
              std::abs(ref_ratio) <
          1e-8);
  }
}

TEST_CASE("radius robustness across degrees and energies") {
  for (const auto& [m, lam] : std::vector<std::pair<int, double>>{
           {5, 30.0}, {6, 50.0}}) {
    std::vector<double> a(static_cast<size_t>(m - 1), 0.0);
    a[0] = 1.0;
    a.back() = -2.0;
    const PotentialSpec spec(m, a);
    RaySpec base;
    const OriginData ref = origin_data(spec, cplx{lam, 0.0}, 1, base);
    RaySpec grown;
    grown.radius = 1.5 * ref.radius_used;
    const OriginData od2 = origin_data(spec, cplx{lam, 0.0}, 1, grown);
    const cplx r1 = ref.derivative / ref.value;
    const cplx r2 = od2.derivative / od2.value;
    CHECK(std::abs(r2 - r1) / std::abs(r1) < 1e-8);
  }
}

TEST_CASE("resolve_radius meets the exponent threshold") {
  const std::vector<cplx> a{cplx{2.0, 0.0}, cplx{-3.0, 0.0}};
  const cplx lambda{10.0, -4.0};
  const double R = resolve_radius(a, 3, lambda, 0.0, 1e-10);
  CHECK(F_eval(cplx{R, 0.0}, a, 3, lambda).real() >= 25.0);
}
