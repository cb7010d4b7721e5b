#include "ptspec/asymptotics.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "ptspec/errors.hpp"

namespace ptspec {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Kronrod 7-15 pair on [-1,1].
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {0.129484966168870, 0.279705391489277,
                                     0.381830050505119, 0.417959183673469};

struct GkResult {
  double integral;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kKronrodNodes[i]);
    fv[14 - i] = f(c + h * kKronrodNodes[i]);
  }
  fv[7] = f(c);
  double kron = 0.0;
  for (int i = 0; i < 7; ++i)
    kron += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
  kron += kKronrodWeights[7] * fv[7];
  kron *= h;
  double gauss = kGaussWeights[3] * fv[7];
  for (int i = 0; i < 3; ++i)
    gauss += kGaussWeights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  gauss *= h;
  return {kron, std::abs(kron - gauss)};
}

double adaptive_quad(const std::function<double(double)>& f, double a,
                     double b, double abs_tol) {
  struct Panel {
    double a, b, integral, error;
  };
  GkResult whole = gk15(f, a, b);
  std::vector<Panel> panels{{a, b, whole.integral, whole.error}};
  for (int pass = 0; pass < 60; ++pass) {
    double total_err = 0.0;
    size_t worst = 0;
    for (size_t i = 0; i < panels.size(); ++i) {
      total_err += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    if (total_err < abs_tol) break;
    Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    GkResult left = gk15(f, p.a, mid);
    GkResult right = gk15(f, mid, p.b);
    panels[worst] = {p.a, mid, left.integral, left.error};
    panels.push_back({mid, p.b, right.integral, right.error});
  }
  double total = 0.0;
  for (const Panel& p : panels) total += p.integral;
  return total;
}

// Integrand sqrt(1+t^m) - t^{m/2}, written to avoid cancellation at
// large t where both terms blow up.
double k_integrand(double t, int m) {
  const double tm = std::pow(t, m);
  if (tm > 1e-2) {
    const double root = std::pow(t, 0.5 * m);
    return root * std::expm1(0.5 * std::log1p(1.0 / tm));
  }
  return std::sqrt(1.0 + tm) - std::pow(t, 0.5 * m);
}

// Tail beyond T from the binomial series of t^{m/2}((1+t^{-m})^{1/2} - 1):
// sum_k C(1/2,k) T^{m/2-mk+1} / (mk - m/2 - 1).
double k_tail(double T, int m) {
  double coeff = 1.0;  // C(1/2, k) built up by recurrence
  double sum = 0.0;
  for (int k = 1; k <= 80; ++k) {
    coeff *= (0.5 - (k - 1)) / k;
    const double expo = 0.5 * m - static_cast<double>(m) * k + 1.0;
    const double term = coeff * std::pow(T, expo) / (-expo);
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

}  // namespace

double K_const(int m, KMethod method) {
  if (m < 3)
    throw DivergenceError("K diverges for m = 2 (integrand tail ~ 1/(2t))");
  if (method == KMethod::Gamma) {
    return -0.5 / std::sqrt(kPi) * std::tgamma(-0.5 - 1.0 / m) *
           std::tgamma(1.0 + 1.0 / m);
  }
  const double T = 8.0;
  const double head =
      adaptive_quad([m](double t) { return k_integrand(t, m); }, 0.0, T, 1e-13);
  return head + k_tail(T, m);
}

double asymptotic_eigenvalue(int m, int k) {
  if (m < 3) throw InvalidSpecError("asymptotic law requires m >= 3");
  if (k < 1) throw InvalidSpecError("asymptotic law requires k >= 1");
  const double base = std::tgamma(1.5 + 1.0 / m) * std::sqrt(kPi) *
                      (k - 0.5) /
                      (std::sin(kPi / m) * std::tgamma(1.0 + 1.0 / m));
  return std::pow(base, 2.0 * m / (m + 2));
}

}  // namespace ptspec
