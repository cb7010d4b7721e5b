#include "ptspec/series.hpp"

#include <cmath>

#include "ptspec/errors.hpp"

namespace ptspec {

namespace {

bool finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// q_n of Q0(w) = 1 + a_1 w + ... + a_{m-1} w^{m-1} + lambda w^m.
cplx q_coeff(std::span<const cplx> coeffs, int m, cplx lambda, int n) {
  if (n == 0) return {1.0, 0.0};
  if (n < m) return coeffs[static_cast<size_t>(n - 1)];
  if (n == m) return lambda;
  return {0.0, 0.0};
}

}  // namespace

SeriesCoeffs expand_b(std::span<const cplx> coeffs, int m, cplx lambda,
                      int J) {
  if (m < 2) throw InvalidSpecError("expand_b: m must be >= 2");
  if (coeffs.size() != static_cast<size_t>(m - 1))
    throw InvalidSpecError("expand_b: coefficient vector must have length m-1");
  if (J < 1) throw InvalidSpecError("expand_b: J must be >= 1");
  if (J > kSeriesCap)
    throw CapacityError("expand_b: J exceeds the series cap of 64");
  if (!finite(lambda)) throw InvalidSpecError("expand_b: non-finite lambda");
  for (cplx c : coeffs)
    if (!finite(c)) throw InvalidSpecError("expand_b: non-finite coefficient");

  // S(w) = 1 + sum b_j w^j with S^2 = Q0: match coefficients of w^n.
  SeriesCoeffs sc;
  sc.m = m;
  sc.lambda_used = lambda;
  sc.b.assign(static_cast<size_t>(J) + 1, cplx{0.0, 0.0});
  sc.b[0] = 1.0;
  for (int n = 1; n <= J; ++n) {
    cplx cross{0.0, 0.0};
    for (int i = 1; i < n; ++i) cross += sc.b[i] * sc.b[n - i];
    sc.b[n] = 0.5 * (q_coeff(coeffs, m, lambda, n) - cross);
  }

  auto [r, nu] = r_and_nu(coeffs, m, lambda);
  sc.r = r;
  sc.nu_tilde = nu;
  return sc;
}

SeriesCoeffs expand_b(const PotentialSpec& spec, cplx lambda, int J) {
  spec.validate();
  const auto c = spec.complex_coeffs();
  return expand_b(c, spec.m, lambda, J);
}

std::pair<cplx, cplx> r_and_nu(std::span<const cplx> coeffs, int m,
                               cplx lambda) {
  const cplx quarter = -0.25 * static_cast<double>(m);
  if (m % 2 != 0) return {quarter, cplx{0.0, 0.0}};
  // b_{m/2+1} needs only the recurrence up to that order.
  const int need = m / 2 + 1;
  SeriesCoeffs partial;
  partial.m = m;
  partial.b.assign(static_cast<size_t>(need) + 1, cplx{0.0, 0.0});
  partial.b[0] = 1.0;
  for (int n = 1; n <= need; ++n) {
    cplx cross{0.0, 0.0};
    for (int i = 1; i < n; ++i) cross += partial.b[i] * partial.b[n - i];
    partial.b[n] = 0.5 * (q_coeff(coeffs, m, lambda, n) - cross);
  }
  const cplx nu = partial.b[static_cast<size_t>(need)];
  return {quarter - nu, nu};
}

std::pair<cplx, cplx> r_and_nu(const PotentialSpec& spec, cplx lambda) {
  spec.validate();
  const auto c = spec.complex_coeffs();
  return r_and_nu(c, spec.m, lambda);
}

namespace detail {

cplx principal_pow(cplx z, cplx p) {
  if (z == cplx{0.0, 0.0})
    throw BranchCutError("fractional power at z = 0");
  if (z.imag() == 0.0 && z.real() < 0.0)
    throw BranchCutError("fractional power on the branch cut (z < 0)");
  return std::exp(p * std::log(z));
}

}  // namespace detail

cplx F_eval(cplx z, std::span<const cplx> coeffs, int m, cplx lambda) {
  const int j_max = f_term_count(m);
  const SeriesCoeffs sc = expand_b(coeffs, m, lambda, j_max);
  cplx F = (2.0 / (m + 2)) *
           detail::principal_pow(z, cplx{0.5 * (m + 2), 0.0});
  for (int j = 1; j <= j_max; ++j) {
    const double expo = 0.5 * (m + 2 - 2 * j);
    F += (2.0 / (m + 2 - 2 * j)) * sc.bj(j) *
         detail::principal_pow(z, cplx{expo, 0.0});
  }
  return F;
}

cplx F_eval(cplx z, const PotentialSpec& spec, cplx lambda) {
  spec.validate();
  const auto c = spec.complex_coeffs();
  return F_eval(z, c, spec.m, lambda);
}

cplx F_prime(cplx z, std::span<const cplx> coeffs, int m, cplx lambda) {
  const int j_max = f_term_count(m);
  const SeriesCoeffs sc = expand_b(coeffs, m, lambda, j_max);
  cplx s{1.0, 0.0};
  for (int j = 1; j <= j_max; ++j)
    s += sc.bj(j) * detail::principal_pow(z, cplx{-static_cast<double>(j), 0.0});
  return detail::principal_pow(z, cplx{0.5 * m, 0.0}) * s;
}

}  // namespace ptspec
