#pragma once

#include <optional>

#include "ptspec/potential.hpp"

namespace ptspec {

enum class OverallVerdict { ProvedPositiveReal, ProvedRealGivenReal, Unknown };

enum class SolvableVerdict { StrictlyBelow, Boundary, Above, NotApplicable };

// Which of the proved sufficient conditions applies to a spec, with the
// witness data and numeric thresholds that make the verdict re-checkable.
struct HypothesisReport {
  std::optional<int> theorem_main_witness;        // smallest admissible j
  std::optional<double> ext_thm_reality_bound;    // eq51 right side
  std::optional<double> ext_thm_positivity_bound; // eq52 right side
  std::optional<std::pair<double, double>> small_m_bounds;
  SolvableVerdict exactly_solvable = SolvableVerdict::NotApplicable;
  OverallVerdict overall = OverallVerdict::Unknown;
};

// Smallest integer j with 1 <= j <= m/2 and (j-k) a_k >= 0 for all k;
// nullopt when no witness exists. Zero coefficients satisfy the
// inequality vacuously.
std::optional<int> check_main(const PotentialSpec& spec);

// The two extension theorems for P(z) = alpha z^3 + beta z^2 + gamma z,
// m >= 4. Sign regime alpha<0, gamma<0 uses the tan(pi/m) bounds; the
// regime m in {4,5,6}, alpha>0, gamma<0 uses the tan(2pi/m) bounds.
// Bounds of +infinity mean "any real beta".
struct ExtensionReport {
  bool applicable = false;
  double reality_bound = 0.0;
  double positivity_bound = 0.0;
  OverallVerdict verdict = OverallVerdict::Unknown;
};
ExtensionReport check_extensions(int m, double alpha, double beta,
                                 double gamma);

// Potential (iz)^m + alpha (iz)^{m/2-1}, even m >= 4: all eigenvalues
// positive real for alpha < m/2; at alpha = m/2 the smallest is zero with
// ground state exp[2/(m+2) (iz)^{(m+2)/2}].
struct SolvableReport {
  SolvableVerdict verdict = SolvableVerdict::NotApplicable;
  // Set at the boundary: lambda_0 = 0 and the exponent factor 2/(m+2).
  std::optional<double> lambda0;
  std::optional<double> ground_state_prefactor;
};
SolvableReport check_exactly_solvable(int m, double alpha);

// Quasi-exactly-solvable quartic family: maps (alpha, beta, J) to the
// m = 4 spec a = (2 alpha, alpha^2 - 2 beta, -2(alpha beta - J)) and runs
// the main-theorem check on it. J may be any real number here.
struct QesReport {
  PotentialSpec spec;
  std::optional<int> main_witness;
  OverallVerdict verdict = OverallVerdict::Unknown;
};
QesReport qes_quartic(double alpha, double beta, double J);

// Aggregate report for a spec: main theorem, then (when the coefficient
// pattern matches) the cubic-tail extensions and the exactly-solvable
// family. A Boundary verdict proves reality but not positivity of the
// lowest eigenvalue, so it does not set overall = ProvedPositiveReal.
HypothesisReport build_report(const PotentialSpec& spec);

}  // namespace ptspec
