#include "ptspec/ray.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ptspec/errors.hpp"
#include "ptspec/series.hpp"

namespace ptspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSeedOrder = 40;   // exponent series extension
constexpr int kSeedTerms = 48;   // prefactor correction terms
constexpr double kRenormHigh = 1e2;
constexpr double kRenormLow = 1e-2;

// Q(z) = z^m + c_1 z^{m-1} + ... + c_{m-1} z + lambda.
cplx eval_Q(std::span<const cplx> coeffs, int m, cplx lambda, cplx z) {
  cplx q{1.0, 0.0};
  for (int j = 0; j < m - 1; ++j) q = q * z + coeffs[static_cast<size_t>(j)];
  return q * z + lambda;
}

// Everything the asymptotic seed needs, precomputed per (coeffs, lambda).
//
// The ansatz is f = z^r exp(-F_J(z)) u(1/sqrt z) with
//   F_J' = z^{m/2} S(1/z),  S = 1 + sum_{j<=J, j != m/2+1} b_j w^j,
// (the j = m/2+1 slot of even m integrates to the log absorbed in r) and
// u = sum_p d_p t^p solving the residual equation
//   (t^{m+3}/4) u_tt + (3/4 - r) t^{m+2} u_t + S(t^2) u_t + V(t) u = 0
// term by term. V collects what the truncated exponent misses:
//   V = t^{-m-3}[S_full^2 - Q0](t^2)
//       + t^{-1}[sum_j j b_j t^{2j} - 2 b^2 t^{m+2}] + (r^2 - r + b^2) t^{m+1}
// with b the removed log-slot coefficient (0 for odd m). All powers are
// nonnegative by construction.
struct SeedExpansion {
  int m = 0;
  cplx r{0.0, 0.0};
  std::vector<cplx> b;  // b[0]=1, b[j]=b_j up to kSeedOrder+1
  std::vector<cplx> s;  // S coefficients (log slot zeroed)
  std::vector<cplx> V;  // residual polynomial, degree <= kSeedTerms
  std::vector<cplx> d;  // correction coefficients d_0..kSeedTerms
};

SeedExpansion build_seed_expansion(std::span<const cplx> coeffs, int m,
                                   cplx lambda) {
  SeedExpansion se;
  se.m = m;
  const int J = kSeedOrder;
  const SeriesCoeffs sc = expand_b(coeffs, m, lambda, J + 1);
  se.r = sc.r;
  se.b.assign(sc.b.begin(), sc.b.end());

  const int log_slot = (m % 2 == 0) ? m / 2 + 1 : -1;
  const cplx blog =
      (log_slot > 0) ? se.b[static_cast<size_t>(log_slot)] : cplx{0.0, 0.0};
  se.s = se.b;
  se.s.resize(static_cast<size_t>(J) + 1);
  if (log_slot > 0 && log_slot <= J) se.s[static_cast<size_t>(log_slot)] = 0.0;

  se.V.assign(static_cast<size_t>(kSeedTerms) + 1, cplx{0.0, 0.0});
  // t^{-m-3} [S_full^2 - Q0](t^2): entries vanish through order J, so only
  // n in (J, (kSeedTerms+m+3)/2] contribute.
  const int n_max = std::min(2 * J, (kSeedTerms + m + 3) / 2);
  for (int n = J + 1; n <= n_max; ++n) {
    cplx conv{0.0, 0.0};
    for (int i = std::max(0, n - J); i <= std::min(J, n); ++i)
      conv += se.b[static_cast<size_t>(i)] * se.b[static_cast<size_t>(n - i)];
    if (n >= 1 && n < m) conv -= coeffs[static_cast<size_t>(n - 1)];
    else if (n == m) conv -= lambda;
    else if (n == 0) conv -= 1.0;
    const int pow_t = 2 * n - m - 3;
    if (pow_t >= 0 && pow_t <= kSeedTerms)
      se.V[static_cast<size_t>(pow_t)] += conv;
  }
  // t^{-1} sum_j j b_j t^{2j} over the S slots.
  for (int j = 1; j <= J; ++j) {
    const int pow_t = 2 * j - 1;
    if (pow_t <= kSeedTerms)
      se.V[static_cast<size_t>(pow_t)] +=
          static_cast<double>(j) * se.s[static_cast<size_t>(j)];
  }
  if (m + 1 <= kSeedTerms)
    se.V[static_cast<size_t>(m + 1)] += se.r * se.r - se.r + blog * blog -
                                        2.0 * blog * blog;
  // (the -2 b^2 t^{m+1} term from the S bucket merges with r^2 - r + b^2)

  se.d.assign(static_cast<size_t>(kSeedTerms) + 1, cplx{0.0, 0.0});
  se.d[0] = 1.0;
  for (int p = 1; p <= kSeedTerms; ++p) {
    cplx acc{0.0, 0.0};
    for (int j = 1; 2 * j <= p - 1; ++j) {
      if (j > J) break;
      acc += se.s[static_cast<size_t>(j)] * static_cast<double>(p - 2 * j) *
             se.d[static_cast<size_t>(p - 2 * j)];
    }
    const int q = p - m - 2;
    if (q >= 0)
      acc += static_cast<double>(q) *
             (0.25 * (q - 1) + 0.75 - se.r) * se.d[static_cast<size_t>(q)];
    for (int vp = 0; vp <= std::min(p - 1, kSeedTerms); ++vp)
      acc += se.V[static_cast<size_t>(vp)] *
             se.d[static_cast<size_t>(p - 1 - vp)];
    se.d[static_cast<size_t>(p)] = -acc / static_cast<double>(p);
  }
  return se;
}

// F_J(z) with the extended exponent series (log slot skipped).
cplx F_extended(const SeedExpansion& se, cplx z) {
  const int m = se.m;
  cplx F = (2.0 / (m + 2)) * detail::principal_pow(z, cplx{0.5 * (m + 2), 0.0});
  for (int j = 1; j <= kSeedOrder; ++j) {
    if (m + 2 - 2 * j == 0) continue;
    const cplx bj = se.s[static_cast<size_t>(j)];
    if (bj == cplx{0.0, 0.0}) continue;
    F += (2.0 / (m + 2 - 2 * j)) * bj *
         detail::principal_pow(z, cplx{0.5 * (m + 2 - 2 * j), 0.0});
  }
  return F;
}

cplx F_prime_extended(const SeedExpansion& se, cplx z) {
  const cplx w = 1.0 / z;
  cplx s{0.0, 0.0};
  for (int j = kSeedOrder; j >= 1; --j)
    s = (s + se.s[static_cast<size_t>(j)]) * w;
  return detail::principal_pow(z, cplx{0.5 * se.m, 0.0}) * (1.0 + s);
}

struct SeedResult {
  BoundaryFrame frame;
  double err_estimate = 0.0;
};

SeedResult seed_at(const SeedExpansion& se, std::span<const cplx> coeffs,
                   cplx lambda, cplx z0) {
  const int m = se.m;
  if (z0 == cplx{0.0, 0.0})
    throw SeedRadiusError("seed point must be away from the origin");
  const double theta = std::arg(z0);
  if (std::abs(theta) >= 3.0 * kPi / (m + 2))
    throw SectorError("seed direction outside |arg z| < 3 pi/(m+2)");

  const cplx t0 = detail::principal_pow(z0, cplx{-0.5, 0.0});

  // u(t0) and u_t(t0). The correction ladders are sparse (rung spacings 2
  // and m+2), so the truncation estimate looks at a trailing window, not
  // at single terms.
  cplx u{1.0, 0.0}, ut{0.0, 0.0};
  cplx tp = t0;
  bool exploded = false;
  for (int p = 1; p <= kSeedTerms; ++p) {
    const cplx term = se.d[static_cast<size_t>(p)] * tp;
    if (std::abs(term) > 1e6) {
      exploded = true;
      break;
    }
    u += term;
    ut += static_cast<double>(p) * term / t0;
    tp *= t0;
  }
  double err = exploded ? 1e9 : 0.0;
  if (!exploded) {
    const double at0 = std::abs(t0);
    for (int p = kSeedTerms - (m + 1); p <= kSeedTerms; ++p)
      err = std::max(err, std::abs(se.d[static_cast<size_t>(p)]) *
                              std::pow(at0, p));
  }

  // Exponent truncation: first omitted F term, with a geometric cushion.
  {
    const int j = kSeedOrder + 1;
    const cplx bj = se.b[static_cast<size_t>(j)];
    const double expo = 0.5 * (m + 2 - 2 * j);
    err += 3.0 * std::abs(2.0 / (m + 2 - 2 * j) * bj) *
           std::pow(std::abs(z0), expo);
  }

  const cplx F0 = F_extended(se, z0);
  if (F0.real() < 5.0)
    throw SeedRadiusError("seed radius too small: Re F < 5 on the ray");
  const cplx Fp = F_prime_extended(se, z0);

  BoundaryFrame frame;
  frame.log_scale = -F0 + se.r * std::log(z0);
  frame.v = u;
  frame.dv = (se.r / z0 - Fp) * u - 0.5 * t0 * t0 * t0 * ut;
  frame.renormalize();

  (void)coeffs;
  (void)lambda;
  return {frame, err};
}

struct Dopri5Work {
  std::vector<cplx> k1, k2, k3, k4, k5, k6, k7, ytmp, y5, y4;
};

void rhs(std::span<const cplx> coeffs, int m, cplx lambda, cplx eitheta,
         double rho, std::span<const cplx> y, std::vector<cplx>& dy) {
  const cplx z = rho * eitheta;
  const cplx Q = eval_Q(coeffs, m, lambda, z);
  const size_t nf = y.size() / 2;
  for (size_t i = 0; i < nf; ++i) {
    dy[2 * i] = -eitheta * y[2 * i + 1];
    dy[2 * i + 1] = -eitheta * Q * y[2 * i];
  }
}

}  // namespace

double BoundaryFrame::mag() const { return std::max(std::abs(v), std::abs(dv)); }

void BoundaryFrame::renormalize() {
  const double s = mag();
  if (s <= 0.0) throw EvaluationError("frame collapsed to (0, 0)");
  if (s > kRenormHigh || s < kRenormLow) {
    v /= s;
    dv /= s;
    log_scale += std::log(s);
  }
}

cplx OriginData::fk_prime(int m) const {
  return unit_root(m, -static_cast<long long>(k)) * derivative;
}

BoundaryFrame wkb_seed(std::span<const cplx> coeffs, int m, cplx lambda,
                       cplx z0, double seed_tol) {
  const SeedExpansion se = build_seed_expansion(coeffs, m, lambda);
  SeedResult sr = seed_at(se, coeffs, lambda, z0);
  if (sr.err_estimate > seed_tol)
    throw SeedRadiusError(
        "seed series cannot reach the requested tolerance at |z0| = " +
        std::to_string(std::abs(z0)));
  return sr.frame;
}

BoundaryFrame wkb_seed(const PotentialSpec& spec, cplx lambda, cplx z0,
                       double seed_tol) {
  spec.validate();
  const auto c = spec.complex_coeffs();
  return wkb_seed(c, spec.m, lambda, z0, seed_tol);
}

BoundaryFrame wkb_seed(const RotatedSpec& spec, cplx lambda, cplx z0,
                       double seed_tol) {
  return wkb_seed(spec.coeffs, spec.m, spec.lambda_factor * lambda, z0,
                  seed_tol);
}

double resolve_radius(std::span<const cplx> coeffs, int m, cplx lambda,
                      double angle, double seed_tol) {
  // Fujiwara-style bound keeps the seed outside every root of Q, where the
  // b series converges geometrically.
  double root_bound = std::pow(std::abs(lambda), 1.0 / m);
  for (size_t j = 0; j < coeffs.size(); ++j)
    root_bound = std::max(
        root_bound, std::pow(std::abs(coeffs[j]), 1.0 / static_cast<double>(j + 1)));
  double R = std::max(3.0, 2.5 * root_bound);

  const SeedExpansion se = build_seed_expansion(coeffs, m, lambda);
  const cplx dir = std::polar(1.0, angle);
  for (int i = 0; i < 200; ++i) {
    if (F_extended(se, R * dir).real() >= 25.0) break;
    R *= 1.2;
  }
  for (int i = 0; i < 20; ++i) {
    try {
      SeedResult sr = seed_at(se, coeffs, lambda, R * dir);
      if (sr.err_estimate <= seed_tol) return R;
    } catch (const SeedRadiusError&) {
    }
    R *= 1.3;
  }
  throw SeedRadiusError("no radius reached the seed tolerance");
}

std::vector<BoundaryFrame> propagate_frames(
    std::span<const BoundaryFrame> frames, std::span<const cplx> coeffs, int m,
    cplx lambda, const RaySpec& ray, const StepObserver& observer,
    double stop_radius) {
  if (frames.empty()) return {};
  if (ray.radius <= 0.0)
    throw SeedRadiusError("propagate_frames requires an explicit radius");
  if (stop_radius < 0.0 || stop_radius >= ray.radius)
    throw InvalidSpecError("stop_radius must lie in [0, radius)");
  const double R = ray.radius;
  const double s_end = R - stop_radius;
  const cplx eitheta = std::polar(1.0, ray.angle);
  const size_t nf = frames.size();
  const double rtol = ray.rel_tol;
  const double atol = 1e-14;

  std::vector<cplx> y(2 * nf);
  std::vector<cplx> sigma(nf);
  for (size_t i = 0; i < nf; ++i) {
    y[2 * i] = frames[i].v;
    y[2 * i + 1] = frames[i].dv;
    sigma[i] = frames[i].log_scale;
  }
  cplx shared_scale{0.0, 0.0};

  Dopri5Work w;
  for (auto* vec : {&w.k1, &w.k2, &w.k3, &w.k4, &w.k5, &w.k6, &w.k7, &w.ytmp,
                    &w.y5, &w.y4})
    vec->assign(2 * nf, cplx{0.0, 0.0});

  auto emit = [&](double s_pos) {
    if (!observer) return;
    std::vector<BoundaryFrame> snap(nf);
    for (size_t i = 0; i < nf; ++i)
      snap[i] = {y[2 * i], y[2 * i + 1], sigma[i] + shared_scale};
    observer((R - s_pos) * eitheta, snap);
  };

  double s = 0.0;
  rhs(coeffs, m, lambda, eitheta, R, y, w.k1);
  double h = std::min(0.05 * R,
                      0.1 / (1.0 + std::sqrt(std::abs(
                                 eval_Q(coeffs, m, lambda, R * eitheta)))));
  emit(0.0);

  int steps = 0;
  bool fsal_valid = true;
  while (s < s_end) {
    if (++steps > ray.max_steps)
      throw MaxStepsError("propagation exceeded max_steps = " +
                          std::to_string(ray.max_steps) + " (R = " +
                          std::to_string(R) + ", |lambda| = " +
                          std::to_string(std::abs(lambda)) + ")");
    h = std::min(h, s_end - s);
    if (h < 1e-14 * R)
      throw StiffnessError("step size underflow during propagation",
                           std::abs(R - s));
    if (!fsal_valid) rhs(coeffs, m, lambda, eitheta, R - s, y, w.k1);

    auto stage = [&](std::vector<cplx>& k, double c_frac,
                     std::initializer_list<std::pair<const std::vector<cplx>*,
                                                     double>> terms) {
      for (size_t i = 0; i < 2 * nf; ++i) {
        cplx acc{0.0, 0.0};
        for (const auto& [kv, aij] : terms) acc += aij * (*kv)[i];
        w.ytmp[i] = y[i] + h * acc;
      }
      rhs(coeffs, m, lambda, eitheta, R - (s + c_frac * h), w.ytmp, k);
    };

    stage(w.k2, 1.0 / 5, {{&w.k1, 1.0 / 5}});
    stage(w.k3, 3.0 / 10, {{&w.k1, 3.0 / 40}, {&w.k2, 9.0 / 40}});
    stage(w.k4, 4.0 / 5,
          {{&w.k1, 44.0 / 45}, {&w.k2, -56.0 / 15}, {&w.k3, 32.0 / 9}});
    stage(w.k5, 8.0 / 9,
          {{&w.k1, 19372.0 / 6561},
           {&w.k2, -25360.0 / 2187},
           {&w.k3, 64448.0 / 6561},
           {&w.k4, -212.0 / 729}});
    stage(w.k6, 1.0,
          {{&w.k1, 9017.0 / 3168},
           {&w.k2, -355.0 / 33},
           {&w.k3, 46732.0 / 5247},
           {&w.k4, 49.0 / 176},
           {&w.k5, -5103.0 / 18656}});
    for (size_t i = 0; i < 2 * nf; ++i)
      w.y5[i] = y[i] + h * (35.0 / 384 * w.k1[i] + 500.0 / 1113 * w.k3[i] +
                            125.0 / 192 * w.k4[i] - 2187.0 / 6784 * w.k5[i] +
                            11.0 / 84 * w.k6[i]);
    rhs(coeffs, m, lambda, eitheta, R - (s + h), w.y5, w.k7);

    double errnorm = 0.0;
    for (size_t i = 0; i < nf; ++i) {
      const double frame_scale =
          std::max({std::abs(y[2 * i]), std::abs(y[2 * i + 1]),
                    std::abs(w.y5[2 * i]), std::abs(w.y5[2 * i + 1])});
      const double sc = atol + rtol * frame_scale;
      for (size_t c = 2 * i; c < 2 * i + 2; ++c) {
        const cplx e = h * (71.0 / 57600 * w.k1[c] - 71.0 / 16695 * w.k3[c] +
                            71.0 / 1920 * w.k4[c] -
                            17253.0 / 339200 * w.k5[c] +
                            22.0 / 525 * w.k6[c] - 1.0 / 40 * w.k7[c]);
        errnorm = std::max(errnorm, std::abs(e) / sc);
      }
    }

    if (errnorm <= 1.0) {
      s += h;
      y.swap(w.y5);
      w.k1.swap(w.k7);
      fsal_valid = true;
      double maxc = 0.0;
      for (const cplx& c : y) maxc = std::max(maxc, std::abs(c));
      if (maxc > kRenormHigh || maxc < kRenormLow) {
        for (cplx& c : y) c /= maxc;
        shared_scale += std::log(maxc);
        fsal_valid = false;  // k1 is stale after rescaling
      }
      emit(s);
      h *= std::clamp(0.9 * std::pow(std::max(errnorm, 1e-10), -0.2), 0.25, 4.0);
    } else {
      h *= std::clamp(0.9 * std::pow(errnorm, -0.2), 0.1, 0.9);
      fsal_valid = false;
    }
  }

  std::vector<BoundaryFrame> out(nf);
  for (size_t i = 0; i < nf; ++i) {
    out[i] = {y[2 * i], y[2 * i + 1], sigma[i] + shared_scale};
    out[i].renormalize();
  }
  return out;
}

BoundaryFrame propagate_inward(const BoundaryFrame& frame,
                               std::span<const cplx> coeffs, int m,
                               cplx lambda, const RaySpec& ray,
                               const StepObserver& observer,
                               double stop_radius) {
  std::vector<BoundaryFrame> in{frame};
  return propagate_frames(in, coeffs, m, lambda, ray, observer,
                          stop_radius)[0];
}

BoundaryFrame propagate_inward(const BoundaryFrame& frame,
                               const PotentialSpec& spec, cplx lambda,
                               const RaySpec& ray,
                               const StepObserver& observer,
                               double stop_radius) {
  spec.validate();
  const auto c = spec.complex_coeffs();
  return propagate_inward(frame, c, spec.m, lambda, ray, observer,
                          stop_radius);
}

OriginData compute_f_origin(std::span<const cplx> coeffs, int m, cplx lambda,
                            const RaySpec& ray) {
  RaySpec eff = ray;
  const double seed_tol = std::max(1e-12, 0.1 * eff.rel_tol);
  if (eff.radius <= 0.0)
    eff.radius = resolve_radius(coeffs, m, lambda, eff.angle, seed_tol);
  // A caller-pinned radius is a floor, not a ceiling: grow until the seed
  // series meets tolerance (ratios at z = 0 do not depend on the radius).
  BoundaryFrame seed;
  for (int attempt = 0;; ++attempt) {
    try {
      const cplx z0 = eff.radius * std::polar(1.0, eff.angle);
      seed = wkb_seed(coeffs, m, lambda, z0, seed_tol);
      break;
    } catch (const SeedRadiusError&) {
      if (attempt >= 10) throw;
      eff.radius *= 1.3;
    }
  }
  const BoundaryFrame at0 = propagate_inward(seed, coeffs, m, lambda, eff);
  OriginData od;
  od.value = at0.v;
  od.derivative = at0.dv;
  od.log_scale = at0.log_scale;
  od.k = 0;
  od.lambda = lambda;
  od.radius_used = eff.radius;
  return od;
}

OriginData origin_data(const PotentialSpec& spec, cplx lambda, int k,
                       const RaySpec& ray) {
  spec.validate();
  const RotatedSpec rot = rotate_frame(spec, k);
  try {
    OriginData od =
        compute_f_origin(rot.coeffs, spec.m, rot.lambda_factor * lambda, ray);
    od.k = k;
    od.lambda = lambda;
    return od;
  } catch (const StiffnessError& e) {
    throw StiffnessError("f_" + std::to_string(k) + ": " + e.what(),
                         e.abs_z());
  } catch (const MaxStepsError& e) {
    throw MaxStepsError("f_" + std::to_string(k) + ": " + e.what());
  } catch (const SeedRadiusError& e) {
    throw SeedRadiusError("f_" + std::to_string(k) + ": " + e.what());
  } catch (const SectorError& e) {
    throw SectorError("f_" + std::to_string(k) + ": " + e.what());
  }
}

}  // namespace ptspec
