// Test-only oracles, deliberately independent of the library's own
// numerical paths: a Lanczos gamma, a brute-force binomial expansion of
// the sqrt series, and a fixed-step real shooting solver for half-line
// Dirichlet problems.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracles {

using cplx = std::complex<double>;

// Classic 9-term, g = 7 Lanczos approximation with reflection for x < 1/2.
inline double lanczos_gamma(double x) {
  static const double p[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  const double pi = std::numbers::pi;
  if (x < 0.5)
    return pi / (std::sin(pi * x) * lanczos_gamma(1.0 - x));
  x -= 1.0;
  double acc = p[0];
  for (int i = 1; i < 9; ++i) acc += p[i] / (x + i);
  const double t = x + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

// Coefficients of (1 + u)^{1/2} composed with
// u = a_1 w + ... + a_{m-1} w^{m-1} + lambda w^m, by raw multinomial
// powers u^k -- no shared code with the library recurrence.
inline std::vector<cplx> brute_force_sqrt_series(
    const std::vector<cplx>& coeffs, int m, cplx lambda, int J) {
  std::vector<cplx> u(static_cast<size_t>(J) + 1, cplx{0.0, 0.0});
  for (int n = 1; n <= J && n <= m - 1; ++n)
    u[static_cast<size_t>(n)] = coeffs[static_cast<size_t>(n - 1)];
  if (m <= J) u[static_cast<size_t>(m)] += lambda;

  std::vector<cplx> result(static_cast<size_t>(J) + 1, cplx{0.0, 0.0});
  result[0] = 1.0;
  std::vector<cplx> upow(static_cast<size_t>(J) + 1, cplx{0.0, 0.0});
  upow[0] = 1.0;
  double binom = 1.0;  // C(1/2, k)
  for (int k = 1; k <= J; ++k) {
    binom *= (0.5 - (k - 1)) / k;
    // upow <- upow * u, truncated at J
    std::vector<cplx> next(static_cast<size_t>(J) + 1, cplx{0.0, 0.0});
    for (int i = 0; i <= J; ++i) {
      if (upow[static_cast<size_t>(i)] == cplx{0.0, 0.0}) continue;
      for (int j = 0; i + j <= J; ++j)
        next[static_cast<size_t>(i + j)] +=
            upow[static_cast<size_t>(i)] * u[static_cast<size_t>(j)];
    }
    upow = next;
    for (int n = 0; n <= J; ++n)
      result[static_cast<size_t>(n)] += binom * upow[static_cast<size_t>(n)];
  }
  return result;  // result[j] = b_j, result[0] = 1
}

// Dirichlet eigenvalues mu of -v'' + x^m v = mu v on [0, inf), v(0) = 0,
// by renormalized fixed-step RK4 shooting from x = L inward and bisection
// on the sign of v(0). Returns the first `count`, increasing.
inline std::vector<double> halfline_dirichlet(int m, int count,
                                              double mu_max = 60.0) {
  auto v_at_zero_sign = [m](double mu) {
    const double turn = std::pow(mu, 1.0 / m);
    const double L = std::max(8.0, 2.2 * turn);
    const double h = 1e-4;
    // WKB-flavored decaying start; only the sign of v(0) matters.
    double v = 1.0;
    double dv = -std::sqrt(std::pow(L, m) - mu);
    double x = L;
    auto f = [m, mu](double xx, double vv) {
      return (std::pow(xx, m) - mu) * vv;
    };
    while (x > 0.0) {
      const double step = std::min(h, x);
      const double k1v = -dv, k1d = -f(x, v);
      const double k2v = -(dv + 0.5 * step * k1d),
                   k2d = -f(x - 0.5 * step, v + 0.5 * step * k1v);
      const double k3v = -(dv + 0.5 * step * k2d),
                   k3d = -f(x - 0.5 * step, v + 0.5 * step * k2v);
      const double k4v = -(dv + step * k3d),
                   k4d = -f(x - step, v + step * k3v);
      v += step / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
      dv += step / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
      x -= step;
      const double mag = std::max(std::abs(v), std::abs(dv));
      if (mag > 1e6) {
        v /= mag;
        dv /= mag;
      }
    }
    return v;
  };

  std::vector<double> roots;
  const double grid = 0.25;
  double prev_mu = 0.05, prev_v = v_at_zero_sign(prev_mu);
  for (double mu = prev_mu + grid; mu <= mu_max && (int)roots.size() < count;
       mu += grid) {
    const double cur_v = v_at_zero_sign(mu);
    if (prev_v * cur_v < 0.0) {
      double lo = prev_mu, hi = mu, flo = prev_v;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = v_at_zero_sign(mid);
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_mu = mu;
    prev_v = cur_v;
  }
  return roots;
}

}  // namespace oracles
