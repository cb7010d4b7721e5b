#pragma once

#include <span>

#include "ptspec/potential.hpp"

namespace ptspec {

// Coefficients of the large-z expansion
//   (1 + a_1/z + ... + a_{m-1} z^{1-m} + lambda z^{-m})^{1/2}
//     = 1 + sum_j b_j z^{-j},
// together with the exponent r_m of the WKB prefactor z^{r_m} and
// nu_tilde (0 for odd m, b_{m/2+1} for even m).
struct SeriesCoeffs {
  int m = 0;
  std::vector<cplx> b;  // 1-indexed: b[j] = b_j, b[0] = 1
  cplx r{0.0, 0.0};
  cplx nu_tilde{0.0, 0.0};
  cplx lambda_used{0.0, 0.0};

  int order() const { return static_cast<int>(b.size()) - 1; }
  cplx bj(int j) const { return b.at(static_cast<size_t>(j)); }
};

inline constexpr int kSeriesCap = 64;

// b_1..b_J by matching coefficients of S^2 = Q0 term by term.
// J > kSeriesCap throws CapacityError; non-finite inputs are rejected.
SeriesCoeffs expand_b(std::span<const cplx> coeffs, int m, cplx lambda, int J);
SeriesCoeffs expand_b(const PotentialSpec& spec, cplx lambda, int J);

// (r_m, nu_tilde): r_m = -m/4 for odd m, -m/4 - b_{m/2+1} for even m.
// Lambda-independent for even m >= 4; for m = 2 it depends on lambda.
std::pair<cplx, cplx> r_and_nu(const PotentialSpec& spec, cplx lambda);
std::pair<cplx, cplx> r_and_nu(std::span<const cplx> coeffs, int m,
                               cplx lambda);

// Number of terms in the exponent polynomial F: j runs over 1 <= j < m/2+1.
inline int f_term_count(int m) { return (m % 2 == 0) ? m / 2 : (m + 1) / 2; }

// F(z,a,lambda) = 2/(m+2) z^{(m+2)/2}
//                 + sum_{1<=j<m/2+1} 2/(m+2-2j) b_j z^{(m+2-2j)/2}.
// Principal branch; z on the cut (z.real <= 0, z.imag == 0) throws.
cplx F_eval(cplx z, std::span<const cplx> coeffs, int m, cplx lambda);
cplx F_eval(cplx z, const PotentialSpec& spec, cplx lambda);

// dF/dz = z^{m/2} (1 + sum_{j<m/2+1} b_j z^{-j}).
cplx F_prime(cplx z, std::span<const cplx> coeffs, int m, cplx lambda);

namespace detail {
// Principal-branch z^p with the cut check shared by F_eval and the seeder.
cplx principal_pow(cplx z, cplx p);
}  // namespace detail

}  // namespace ptspec
