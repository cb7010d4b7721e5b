#include "ptspec/criteria.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ptspec/errors.hpp"

namespace ptspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool witness_holds(const PotentialSpec& spec, int j) {
  for (int k = 1; k <= spec.m - 1; ++k)
    if ((j - k) * spec.a[static_cast<size_t>(k - 1)] < 0.0) return false;
  return true;
}

}  // namespace

std::optional<int> check_main(const PotentialSpec& spec) {
  spec.validate();
  // j <= m/2 as a real inequality: for even m that includes j = m/2.
  const int j_max = spec.m / 2;
  for (int j = 1; j <= j_max; ++j)
    if (witness_holds(spec, j)) return j;
  return std::nullopt;
}

ExtensionReport check_extensions(int m, double alpha, double beta,
                                 double gamma) {
  if (m < 4)
    throw InvalidSpecError("extension theorems require m >= 4");
  ExtensionReport rep;
  if (alpha < 0.0 && gamma < 0.0) {
    rep.applicable = true;
    const double ag = std::sqrt(alpha * gamma);
    rep.reality_bound = ag * std::sqrt(3.0 - std::pow(std::tan(kPi / m), 2));
    const double t = std::tan(kPi / (m + 1));
    rep.positivity_bound =
        4.0 * std::sqrt(2.0) * ag * std::sqrt(1.0 - t * t) / (3.0 - t * t);
  } else if ((m == 4 || m == 5 || m == 6) && alpha > 0.0 && gamma < 0.0) {
    rep.applicable = true;
    const double ag = std::sqrt(alpha * std::abs(gamma));
    if (m == 4) {
      rep.reality_bound = kInf;  // tan(pi/2): any real beta qualifies
    } else {
      const double t2 = std::pow(std::tan(2.0 * kPi / m), 2);
      rep.reality_bound = (t2 >= 3.0) ? ag * std::sqrt(t2 - 3.0) : 0.0;
    }
    if (m == 6) {
      const double t = std::tan(2.0 * kPi / 7.0);
      rep.positivity_bound = 4.0 * std::sqrt(2.0) * ag *
                             std::sqrt(1.0 - t * t) / (3.0 - t * t);
    } else {
      rep.positivity_bound = kInf;
    }
  } else {
    return rep;  // NotApplicable: verdict stays Unknown
  }
  if (beta <= rep.reality_bound)
    rep.verdict = OverallVerdict::ProvedPositiveReal;
  else if (beta <= rep.positivity_bound)
    rep.verdict = OverallVerdict::ProvedRealGivenReal;
  return rep;
}

SolvableReport check_exactly_solvable(int m, double alpha) {
  SolvableReport rep;
  if (m < 4 || m % 2 != 0) return rep;
  const double half_m = 0.5 * m;
  if (alpha < half_m) {
    rep.verdict = SolvableVerdict::StrictlyBelow;
  } else if (alpha == half_m) {
    rep.verdict = SolvableVerdict::Boundary;
    rep.lambda0 = 0.0;
    rep.ground_state_prefactor = 2.0 / (m + 2);
  } else {
    rep.verdict = SolvableVerdict::Above;
  }
  return rep;
}

QesReport qes_quartic(double alpha, double beta, double J) {
  QesReport rep;
  rep.spec = PotentialSpec(
      4, {2.0 * alpha, alpha * alpha - 2.0 * beta, -2.0 * (alpha * beta - J)});
  rep.main_witness = check_main(rep.spec);
  const bool proved =
      (alpha * beta >= J) && (alpha >= 0.0 || 2.0 * beta >= alpha * alpha);
  rep.verdict =
      proved ? OverallVerdict::ProvedPositiveReal : OverallVerdict::Unknown;
  return rep;
}

HypothesisReport build_report(const PotentialSpec& spec) {
  spec.validate();
  HypothesisReport rep;
  rep.theorem_main_witness = check_main(spec);
  if (rep.theorem_main_witness) rep.overall = OverallVerdict::ProvedPositiveReal;

  // Cubic-tail pattern a = (0,...,0, alpha, beta, gamma): the extension
  // theorems cover P(z) = alpha z^3 + beta z^2 + gamma z for m >= 4.
  if (spec.m >= 4) {
    bool tail_only = true;
    for (int k = 1; k <= spec.m - 4; ++k)
      if (spec.a[static_cast<size_t>(k - 1)] != 0.0) tail_only = false;
    if (tail_only) {
      const double alpha = spec.a[static_cast<size_t>(spec.m - 4)];
      const double beta = spec.a[static_cast<size_t>(spec.m - 3)];
      const double gamma = spec.a[static_cast<size_t>(spec.m - 2)];
      const ExtensionReport ext =
          check_extensions(spec.m, alpha, beta, gamma);
      if (ext.applicable) {
        rep.ext_thm_reality_bound = ext.reality_bound;
        rep.ext_thm_positivity_bound = ext.positivity_bound;
        if (alpha > 0.0)
          rep.small_m_bounds = {ext.reality_bound, ext.positivity_bound};
        if (ext.verdict == OverallVerdict::ProvedPositiveReal)
          rep.overall = OverallVerdict::ProvedPositiveReal;
        else if (ext.verdict == OverallVerdict::ProvedRealGivenReal &&
                 rep.overall == OverallVerdict::Unknown)
          rep.overall = OverallVerdict::ProvedRealGivenReal;
      }
    }
  }

  // Exactly solvable pattern: single coefficient a_{m/2+1} = alpha.
  if (spec.m >= 4 && spec.m % 2 == 0) {
    const int slot = spec.m / 2 + 1;
    bool single = true;
    for (int k = 1; k <= spec.m - 1; ++k)
      if (k != slot && spec.a[static_cast<size_t>(k - 1)] != 0.0)
        single = false;
    if (single) {
      const double alpha = spec.a[static_cast<size_t>(slot - 1)];
      const SolvableReport sr = check_exactly_solvable(spec.m, alpha);
      rep.exactly_solvable = sr.verdict;
      // Boundary proves reality but the lowest eigenvalue is zero, so it
      // does not upgrade the overall verdict to ProvedPositiveReal.
      if (sr.verdict == SolvableVerdict::StrictlyBelow)
        rep.overall = OverallVerdict::ProvedPositiveReal;
    }
  }
  return rep;
}

}  // namespace ptspec
