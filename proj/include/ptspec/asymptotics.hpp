#pragma once

namespace ptspec {

enum class KMethod { Quadrature, Gamma };

// K = int_0^inf (sqrt(1+t^m) - sqrt(t^m)) dt, m >= 3.
// Gamma route: K = -1/(2 sqrt(pi)) Gamma(-1/2 - 1/m) Gamma(1 + 1/m).
// The integral diverges for m = 2 (DivergenceError).
double K_const(int m, KMethod method);

// Large-k eigenvalue law
//   lambda_k ~ ( Gamma(3/2+1/m) sqrt(pi) (k-1/2)
//                / (sin(pi/m) Gamma(1+1/m)) )^{2m/(m+2)},  m >= 3, k >= 1.
double asymptotic_eigenvalue(int m, int k);

}  // namespace ptspec
