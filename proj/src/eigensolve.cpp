#include "ptspec/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "ptspec/asymptotics.hpp"
#include "ptspec/errors.hpp"
#include "ptspec/parallel.hpp"
#include "ptspec/stokes.hpp"

namespace ptspec {

namespace rootdetail {

double brent(const std::function<double(double)>& f, double a, double b,
             double fa, double fb, double xtol, int max_iter) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw ConvergenceError("brent: root not bracketed");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

std::optional<cplx> secant(const std::function<cplx(cplx)>& f, cplx x0,
                           cplx x1, double xtol, int max_iter) {
  cplx f0 = f(x0), f1 = f(x1);
  for (int it = 0; it < max_iter; ++it) {
    const cplx df = f1 - f0;
    if (std::abs(df) < 1e-300) return std::nullopt;
    const cplx x2 = x1 - f1 * (x1 - x0) / df;
    if (!std::isfinite(x2.real()) || !std::isfinite(x2.imag()))
      return std::nullopt;
    const double step = std::abs(x2 - x1);
    x0 = x1; f0 = f1;
    x1 = x2; f1 = f(x2);
    if (step < xtol * std::max(1.0, std::abs(x2))) return x2;
  }
  return std::nullopt;
}

std::optional<cplx> muller(const std::function<cplx(cplx)>& f, cplx x0,
                           cplx x1, cplx x2, double xtol, int max_iter) {
  cplx f0 = f(x0), f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter; ++it) {
    const cplx h1 = x1 - x0, h2 = x2 - x1;
    if (std::abs(h2) < 1e-300 || std::abs(h1) < 1e-300) return std::nullopt;
    const cplx d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
    const cplx a = (d2 - d1) / (h2 + h1);
    const cplx b = a * h2 + d2;
    const cplx disc = std::sqrt(b * b - 4.0 * f2 * a);
    const cplx den1 = b + disc, den2 = b - disc;
    const cplx den = (std::abs(den1) > std::abs(den2)) ? den1 : den2;
    if (std::abs(den) < 1e-300) return std::nullopt;
    const cplx x3 = x2 - 2.0 * f2 / den;
    const double step = std::abs(x3 - x2);
    x0 = x1; f0 = f1;
    x1 = x2; f1 = f2;
    x2 = x3; f2 = f(x3);
    if (step < xtol * std::max(1.0, std::abs(x3))) return x3;
  }
  return std::nullopt;
}

namespace {

struct ContourSeg {
  cplx za, zb;
  cplx fa, fb;
};

}  // namespace

int winding_number(const std::function<cplx(cplx)>& f, const Window& box,
                   int initial_per_edge) {
  const cplx c0{box.re0, box.im0}, c1{box.re1, box.im0}, c2{box.re1, box.im1},
      c3{box.re0, box.im1};
  std::vector<cplx> nodes;
  auto edge = [&](cplx a, cplx b) {
    for (int i = 0; i < initial_per_edge; ++i)
      nodes.push_back(a + (b - a) * (static_cast<double>(i) /
                                     initial_per_edge));
  };
  edge(c0, c1);
  edge(c1, c2);
  edge(c2, c3);
  edge(c3, c0);
  nodes.push_back(c0);

  std::vector<cplx> vals(nodes.size());
  parallel_for(static_cast<int>(nodes.size()), true, [&](int i) {
    vals[static_cast<size_t>(i)] = f(nodes[static_cast<size_t>(i)]);
  });

  std::vector<ContourSeg> work;
  for (size_t i = 0; i + 1 < nodes.size(); ++i)
    work.push_back({nodes[i], nodes[i + 1], vals[i], vals[i + 1]});

  // Every accepted gap is validated by an actual midpoint evaluation, so
  // a 2 pi phase wrap cannot masquerade as a small principal increment.
  constexpr double kMaxTurn = 1.25;
  const double min_len =
      1e-11 * std::max({std::abs(c0), std::abs(c2), 1.0});
  double total = 0.0;
  size_t evals = nodes.size();
  while (!work.empty()) {
    if (evals > 60000)
      throw ConvergenceError("winding: contour refinement budget exhausted");
    std::vector<cplx> mids(work.size());
    std::vector<cplx> fmids(work.size());
    for (size_t i = 0; i < work.size(); ++i)
      mids[i] = 0.5 * (work[i].za + work[i].zb);
    parallel_for(static_cast<int>(work.size()), true,
                 [&](int i) { fmids[static_cast<size_t>(i)] =
                                  f(mids[static_cast<size_t>(i)]); });
    evals += work.size();

    std::vector<ContourSeg> next;
    for (size_t i = 0; i < work.size(); ++i) {
      const ContourSeg& s = work[i];
      const cplx fm = fmids[i];
      if (std::abs(s.fa) < 1e-290 || std::abs(fm) < 1e-290)
        throw ConvergenceError("winding: zero on the contour");
      const double d1 = std::arg(fm / s.fa);
      const double d2 = std::arg(s.fb / fm);
      const double dd = std::arg(s.fb / s.fa);
      const bool consistent = std::abs(d1 + d2 - dd) < 1e-6;
      if (std::abs(d1) <= kMaxTurn && std::abs(d2) <= kMaxTurn && consistent) {
        total += d1 + d2;
      } else {
        if (std::abs(s.zb - s.za) < min_len)
          throw ConvergenceError(
              "winding: contour passes too close to a zero");
        next.push_back({s.za, mids[i], s.fa, fm});
        next.push_back({mids[i], s.zb, fm, s.fb});
      }
    }
    work.swap(next);
  }
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 0.2)
    throw ConvergenceError("winding: non-integer turn count");
  return static_cast<int>(rounded);
}

}  // namespace rootdetail

namespace {

using rootdetail::winding_number;

constexpr double kPi = std::numbers::pi;

double scale_of(cplx z) { return std::max(1.0, std::abs(z)); }

bool near_any(cplx z, const std::vector<cplx>& set, double tol_scale) {
  for (cplx s : set)
    if (std::abs(z - s) < tol_scale * scale_of(z)) return true;
  return false;
}

int count_inside(const Window& box, const std::vector<cplx>& set) {
  int n = 0;
  for (cplx s : set)
    if (box.contains(s)) ++n;
  return n;
}

Window jitter(const Window& w, double f) {
  const double dre = (w.re1 - w.re0) * f, dim = (w.im1 - w.im0) * f;
  return {w.re0 - dre, w.re1 + dre, w.im0 - dim, w.im1 + dim};
}

int robust_winding(const std::function<cplx(cplx)>& f, Window box,
                   int per_edge = 16) {
  for (int attempt = 0;; ++attempt) {
    try {
      return winding_number(f, box, per_edge);
    } catch (const ConvergenceError&) {
      if (attempt >= 3) throw;
      box = jitter(box, 0.031 * (attempt + 1));
    }
  }
}

struct Solver {
  const PotentialSpec& spec;
  RaySpec ray;
  const FindOptions& opts;
  Window sane{-1e300, 1e300, -1e300, 1e300};

  detail::EigenPoint point(cplx lambda) const {
    return detail::eigen_point(spec, lambda, ray);
  }
  double det(double x) const {
    return detail::real_line_detector(spec, x, ray);
  }
  cplx mval(cplx lambda) const { return point(lambda).M; }
  cplx wphase(cplx lambda) const { return point(lambda).w_phase; }

  std::vector<double> scan_real_roots(double lo, double hi,
                                      double step) const {
    const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / step)));
    std::vector<double> xs(static_cast<size_t>(n) + 1), fs(xs.size());
    for (size_t i = 0; i < xs.size(); ++i)
      xs[i] = lo + (hi - lo) * static_cast<double>(i) / n;
    parallel_for(static_cast<int>(xs.size()), opts.parallel, [&](int i) {
      fs[static_cast<size_t>(i)] = det(xs[static_cast<size_t>(i)]);
    });
    std::vector<double> roots;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
      if (fs[i] == 0.0) {
        roots.push_back(xs[i]);
        continue;
      }
      if (fs[i] * fs[i + 1] < 0.0) {
        const double r = rootdetail::brent(
            [&](double x) { return det(x); }, xs[i], xs[i + 1], fs[i],
            fs[i + 1], 1e-12 * std::max(1.0, std::abs(xs[i + 1])));
        roots.push_back(r);
      }
    }
    return roots;
  }

  // Secant (Muller fallback) on the mismatch; starts are nudged off the
  // real axis so complex pairs are reachable from real seeds. Iterates
  // escaping the sanity region abort the attempt instead of dragging the
  // integrator to enormous |lambda|.
  std::optional<cplx> refine_complex(cplx seed) const {
    const double h = 1e-5 * scale_of(seed);
    const auto f = [&](cplx z) {
      if (!sane.contains(z)) throw ConvergenceError("iterate left region");
      return mval(z);
    };
    try {
      auto root = rootdetail::secant(f, seed, seed + cplx{h, 0.7 * h},
                                     1e-11, 60);
      if (!root)
        root = rootdetail::muller(f, seed - cplx{h, 0.0},
                                  seed + cplx{h, 0.5 * h}, seed, 1e-11, 60);
      return root;
    } catch (const ConvergenceError&) {
      return std::nullopt;
    }
  }
};

}  // namespace

namespace {

FindReport find_in_window(const PotentialSpec& spec, int count,
                          const Window& win_in, const RaySpec& ray,
                          const FindOptions& opts) {
  FindReport report;
  const Window& win = win_in;

  Solver sol{spec, ray, opts};
  {
    const double wre = win.re1 - win.re0, wim = win.im1 - win.im0;
    sol.sane = {win.re0 - wre - 5.0, win.re1 + wre + 5.0,
                win.im0 - wim - 5.0, win.im1 + wim + 5.0};
  }
  if (sol.ray.radius <= 0.0) {
    // Freeze one radius across the whole search so the phase-corrected
    // Wronskian stays continuous in lambda.
    const double far_mag = std::max({std::abs(win.re0), std::abs(win.re1),
                                     std::abs(win.im0), std::abs(win.im1)});
    const cplx lam_far{far_mag, 0.3 * far_mag};
    double R = 0.0;
    for (int k : {-1, 0, 1}) {
      const RotatedSpec rot = rotate_frame(spec, k);
      R = std::max(R, resolve_radius(rot.coeffs, spec.m,
                                     rot.lambda_factor * lam_far, ray.angle,
                                     std::max(1e-12, 0.1 * ray.rel_tol)));
    }
    sol.ray.radius = R;
  }
  report.radius_used = sol.ray.radius;

  const double dup_tol = 0.5 * kRealityTol;
  std::vector<cplx> roots;
  auto accept = [&](cplx cand, double residual) -> bool {
    if (!win.contains(cand)) return false;
    if (near_any(cand, roots, dup_tol)) return false;
    if (residual >= kResidualThreshold) return false;
    roots.push_back(cand);
    return true;
  };

  // Real axis first: sign changes of the pole-free detector.
  {
    double step = (win.re1 - win.re0) / 48.0;
    if (spec.m >= 3) {
      double prev = 0.0;
      for (int k = 1; k <= count + 3; ++k) {
        const double lk = asymptotic_eigenvalue(spec.m, k);
        if (k > 1) step = std::min(step, (lk - prev) / 6.0);
        prev = lk;
      }
    }
    step = std::max(step, (win.re1 - win.re0) / 2500.0);
    for (double x : sol.scan_real_roots(win.re0, win.re1, step)) {
      const auto pt = sol.point(cplx{x, 0.0});
      if (!accept(cplx{x, 0.0}, pt.residual))
        report.diagnostics.push_back("real candidate rejected at lambda = " +
                                     std::to_string(x));
    }
  }

  // Warm-start seeds (possibly complex) from a previous nearby solve.
  for (cplx seed : opts.seeds) {
    if (near_any(seed, roots, dup_tol)) continue;
    if (auto r = sol.refine_complex(seed)) {
      const auto pt = sol.point(*r);
      accept(*r, pt.residual);
    }
  }

  const auto fw = [&](cplx z) { return sol.wphase(z); };

  // Argument-principle count over the window; box bisection recovers
  // whatever the scan and seeds missed. Initial contour density follows
  // the phase budget ~ 2 pi N + K |lambda|^{(m+2)/(2m)} of the Wronskian.
  int per_edge = 20;
  if (spec.m >= 3) {
    const double corner =
        std::hypot(std::max(std::abs(win.re0), std::abs(win.re1)),
                   std::max(std::abs(win.im0), std::abs(win.im1)));
    const double budget =
        2.0 * kPi * (count + 6) + 40.0 +
        6.0 * K_const(spec.m, KMethod::Gamma) *
            std::pow(corner, 0.5 * (spec.m + 2) / spec.m);
    per_edge = std::clamp(static_cast<int>(budget / 4.0), 20, 220);
  }
  try {
    report.window_count = robust_winding(fw, win, per_edge);
  } catch (const ConvergenceError& e) {
    // The determinant can collapse below double precision on part of a
    // large contour while every root stays sign-resolvable on the axis;
    //rather than fail the whole solve, drop the count cross-check.
    report.window_count = -1;
    report.diagnostics.push_back(
        std::string("argument-principle count unavailable: ") + e.what());
  }
  if (report.window_count > static_cast<int>(roots.size())) {
    std::function<void(Window, int, int)> search = [&](Window box, int n_box,
                                                       int depth) {
      const int missing = n_box - count_inside(box, roots);
      if (missing <= 0) return;
      const double w = box.re1 - box.re0, h = box.im1 - box.im0;
      if (missing == 1 || depth >= 24 || (w < 1e-5 && h < 1e-5)) {
        const cplx center{box.re0 + 0.5 * w, box.im0 + 0.5 * h};
        if (auto r = sol.refine_complex(center)) {
          const auto pt = sol.point(*r);
          if (accept(*r, pt.residual)) {
            if (count_inside(box, roots) >= n_box) return;
          }
        }
        if (depth >= 24 || (w < 1e-5 && h < 1e-5)) {
          report.diagnostics.push_back("unresolved roots in a box near Re = " +
                                       std::to_string(center.real()));
          return;
        }
      }
      const double fre = box.re0 + 0.52 * w, fim = box.im0 + 0.52 * h;
      const Window quads[4] = {{box.re0, fre, box.im0, fim},
                               {fre, box.re1, box.im0, fim},
                               {box.re0, fre, fim, box.im1},
                               {fre, box.re1, fim, box.im1}};
      for (const Window& q : quads) {
        const int nq = robust_winding(fw, q, 10);
        if (nq > 0) search(q, nq, depth + 1);
      }
    };
    search(win, report.window_count, 0);
  }

  // Conjugation closure for real coefficient vectors.
  for (size_t i = 0; i < roots.size(); ++i) {
    const cplx conj_root = std::conj(roots[i]);
    if (std::abs(roots[i].imag()) > kRealityTol * scale_of(roots[i]) &&
        !near_any(conj_root, roots, dup_tol)) {
      if (auto r = sol.refine_complex(conj_root)) {
        const auto pt = sol.point(*r);
        accept(*r, pt.residual);
      }
    }
  }

  report.refined_count = static_cast<int>(roots.size());

  // Verification: simplicity and (optionally) survival under radius
  // growth. The mismatch scale collapses exponentially in lambda^{(m+2)/2m}
  // (the two rotated problems approach each other at high energy), so both
  // checks must be scale-relative: the simplicity threshold follows the
  // residual, and real roots are re-located through the sign detector,
  // which only needs the sign of an exponentially small quantity.
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<cplx> verified, unattempted;
  for (cplx root : roots) {
    if (static_cast<int>(verified.size()) >= count) {
      unattempted.push_back(root);
      continue;
    }
    const auto pt = sol.point(root);
    const double h = 1e-4 * scale_of(root);
    const bool is_real_root =
        std::abs(root.imag()) < kRealityTol * scale_of(root);
    bool simple;
    if (is_real_root) {
      // A resolved first-order sign crossing of the detector at FD scale:
      // the centered difference is nonzero and dominates the root residue.
      const double dp = sol.det(root.real() + h);
      const double dm = sol.det(root.real() - h);
      const double d0 = std::abs(sol.det(root.real()));
      simple = dp * dm < 0.0 && std::min(std::abs(dp), std::abs(dm)) >
                                    std::max(10.0 * d0, 1e-18);
    } else {
      const cplx deriv =
          (sol.mval(root + h) - sol.mval(root - h)) / (2.0 * h);
      simple = std::abs(deriv) > 1e3 * std::max(pt.residual, 2.2e-16);
    }
    if (!simple) {
      report.diagnostics.push_back("root failed the simplicity check");
      continue;
    }
    if (opts.verify_radius) {
      Solver grown{spec, sol.ray, opts};
      grown.ray.radius *= 1.5;
      grown.sane = sol.sane;
      std::optional<cplx> regrown;
      const bool is_real =
          std::abs(root.imag()) < kRealityTol * scale_of(root);
      if (is_real) {
        double delta = 2e-5 * scale_of(root);
        for (int widen = 0; widen < 4 && !regrown; ++widen) {
          const double lo = root.real() - delta, hi = root.real() + delta;
          const double flo = grown.det(lo), fhi = grown.det(hi);
          if (flo == 0.0) regrown = cplx{lo, 0.0};
          else if (fhi == 0.0) regrown = cplx{hi, 0.0};
          else if (flo * fhi < 0.0)
            regrown = cplx{rootdetail::brent(
                               [&](double x) { return grown.det(x); }, lo,
                               hi, flo, fhi, 1e-10 * scale_of(root)),
                           0.0};
          delta *= 5.0;
        }
      } else {
        regrown = grown.refine_complex(root);
      }
      if (!regrown || std::abs(*regrown - root) > 1e-6 * scale_of(root)) {
        report.diagnostics.push_back(
            "root did not survive radius growth at lambda re = " +
            std::to_string(root.real()));
        continue;
      }
    }
    verified.push_back(root);
  }

  report.all_roots = verified;
  report.all_roots.insert(report.all_roots.end(), unattempted.begin(),
                          unattempted.end());
  const int take = std::min<int>(count, static_cast<int>(verified.size()));
  for (int i = 0; i < take; ++i) {
    Eigenvalue ev;
    ev.lambda = verified[static_cast<size_t>(i)];
    ev.index = i + 1;
    ev.residual = sol.point(ev.lambda).residual;
    ev.classification =
        (std::abs(ev.lambda.imag()) < kRealityTol * scale_of(ev.lambda))
            ? Classification::Real
            : Classification::ComplexPairMember;
    ev.radius_used = sol.ray.radius;
    report.eigenvalues.push_back(ev);
  }
  if (take < count) {
    report.complete = false;
    report.diagnostics.push_back("window exhausted before count roots found");
  }
  return report;
}

}  // namespace

FindReport find_eigenvalues(const PotentialSpec& spec, int count,
                            std::optional<Window> window, const RaySpec& ray,
                            const FindOptions& opts) {
  spec.validate();
  if (count < 1) throw InvalidSpecError("find_eigenvalues: count must be >= 1");

  // m = 2 is a shifted harmonic oscillator; the closed form is exact and
  // the shooting path stays available as a cross-check.
  if (spec.m == 2 && !opts.force_shooting) {
    FindReport report;
    const double shift = 0.25 * spec.a[0] * spec.a[0];
    for (int k = 1; k <= count; ++k) {
      Eigenvalue ev;
      ev.lambda = cplx{2.0 * k - 1.0 + shift, 0.0};
      ev.index = k;
      ev.residual = 0.0;
      ev.classification = Classification::Real;
      ev.radius_used = 0.0;
      report.eigenvalues.push_back(ev);
    }
    report.window_count = count;
    report.refined_count = count;
    for (const Eigenvalue& ev : report.eigenvalues)
      report.all_roots.push_back(ev.lambda);
    return report;
  }

  if (window) return find_in_window(spec, count, *window, ray, opts);

  // Auto-sized window from the asymptotic law; large coefficients can push
  // the low spectrum outside it, so grow on exhaustion before giving up.
  const double hi =
      (spec.m >= 3)
          ? 1.2 * asymptotic_eigenvalue(spec.m, count + 2)
          : 1.2 * (2.0 * (count + 2) - 1.0 + 0.25 * spec.a[0] * spec.a[0]);
  const double half = 0.5 * (hi + 1.0);
  Window win{-1.0, hi, -half, half};
  FindReport report = find_in_window(spec, count, win, ray, opts);
  // Widened retries can push contours into regions where the determinant
  // collapses below double precision; keep the best complete-as-possible
  // report rather than letting a failed retry escalate.
  for (int attempt = 1; attempt < 3 && !report.complete; ++attempt) {
    const double span = win.re1 - win.re0;
    win.re0 -= 0.6 * span;
    win.re1 += 0.3 * span;
    win.im0 *= 1.8;
    win.im1 *= 1.8;
    try {
      FindReport wider = find_in_window(spec, count, win, ray, opts);
      if (wider.eigenvalues.size() > report.eigenvalues.size() ||
          wider.complete)
        report = wider;
      if (report.complete) break;
    } catch (const ConvergenceError&) {
      break;
    }
  }
  return report;
}

std::vector<AssociatedEigenvalue> associated_spectrum(
    const PotentialSpec& spec, BoundaryCondition bc, int count,
    const RaySpec& ray) {
  spec.validate();
  if (count < 1)
    throw InvalidSpecError("associated_spectrum: count must be >= 1");
  const int m = spec.m;
  const auto base = spec.complex_coeffs();
  const auto coeffs = rotate_coeffs(base, m, -1);
  const cplx omega2 = unit_root(m, 2);

  // |E_j| growth estimated from f(0) ~ E^{-1/4} exp(K E^{(m+2)/(2m)}).
  const double nu = 0.5 * (m + 2) / m;
  double kconst = 1.0;
  if (m >= 3) kconst = K_const(m, KMethod::Gamma);
  auto xhat = [&](int j) {
    if (m == 2) return 4.0 * j;
    return std::pow(j * kPi / (kconst * std::sin(kPi * nu)), 1.0 / nu);
  };

  struct Probe {
    cplx val;
    cplx ratio;
    double residual;
  };
  auto probe = [&](cplx E, const RaySpec& r) {
    const OriginData od = compute_f_origin(coeffs, m, E, r);
    const double mag = std::max(std::abs(od.value), std::abs(od.derivative));
    Probe p;
    if (bc == BoundaryCondition::Dirichlet) {
      p.val = od.value / mag * std::polar(1.0, od.log_scale.imag());
      p.ratio = od.value / od.derivative;
      p.residual = std::abs(od.value) / mag;
    } else {
      p.val = od.derivative / mag * std::polar(1.0, od.log_scale.imag());
      p.ratio = od.derivative / od.value;
      p.residual = std::abs(od.derivative) / mag;
    }
    return p;
  };

  std::vector<cplx> roots;
  const double dup_tol = 1e-7;
  for (double widen = 1.0; widen <= 2.0 && static_cast<int>(roots.size()) <
                                               count;
       widen *= 2.0) {
    roots.clear();
    for (int i = 1; i <= count + 12; ++i) {
      const double xr = (i == 1) ? 2.0 : -0.5 * (xhat(i - 1) + xhat(i));
      const double xl = -0.5 * (xhat(i) + xhat(i + 1));
      const double pad = 0.02 * (xr - xl);
      const double h = widen * std::max(3.0, 0.5 * std::abs(xl));
      Window box{xl - pad, xr + pad, -h, h};

      RaySpec box_ray = ray;
      if (box_ray.radius <= 0.0) {
        const cplx far{box.re0, box.im1};
        box_ray.radius = resolve_radius(coeffs, m, far, ray.angle,
                                        std::max(1e-12, 0.1 * ray.rel_tol));
      }
      const auto fwind = [&](cplx E) { return probe(E, box_ray).val; };
      const auto fratio = [&](cplx E) { return probe(E, box_ray).ratio; };

      std::function<void(Window, int, int)> search = [&](Window b, int nb,
                                                         int depth) {
        const int missing = nb - count_inside(b, roots);
        if (missing <= 0) return;
        const double bw = b.re1 - b.re0, bh = b.im1 - b.im0;
        if (missing == 1 || depth >= 22) {
          const cplx center{b.re0 + 0.5 * bw, b.im0 + 0.5 * bh};
          const double hh = 1e-5 * scale_of(center);
          const Window sane{box.re0 - 2.0 * (box.re1 - box.re0) - 5.0,
                            box.re1 + 2.0 * (box.re1 - box.re0) + 5.0,
                            3.0 * box.im0 - 5.0, 3.0 * box.im1 + 5.0};
          const auto fsafe = [&](cplx E) {
            if (!sane.contains(E))
              throw ConvergenceError("iterate left region");
            return fratio(E);
          };
          std::optional<cplx> r;
          try {
            r = rootdetail::secant(fsafe, center,
                                   center + cplx{hh, 0.6 * hh}, 1e-11, 60);
            if (!r)
              r = rootdetail::muller(fsafe, center - cplx{hh, 0.0},
                                     center + cplx{hh, 0.5 * hh}, center,
                                     1e-11, 60);
          } catch (const ConvergenceError&) {
            r = std::nullopt;
          }
          if (r && !near_any(*r, roots, dup_tol) &&
              probe(*r, box_ray).residual < kResidualThreshold) {
            roots.push_back(*r);
            if (count_inside(b, roots) >= nb) return;
          }
          if (depth >= 22) return;
        }
        const double fre = b.re0 + 0.52 * bw, fim = b.im0 + 0.52 * bh;
        const Window quads[4] = {{b.re0, fre, b.im0, fim},
                                 {fre, b.re1, b.im0, fim},
                                 {b.re0, fre, fim, b.im1},
                                 {fre, b.re1, fim, b.im1}};
        for (const Window& q : quads) {
          const int nq = robust_winding(fwind, q, 10);
          if (nq > 0) search(q, nq, depth + 1);
        }
      };
      const int nbox = robust_winding(fwind, box, 14);
      if (nbox > 0) search(box, nbox, 0);
      if (static_cast<int>(roots.size()) >= count) break;
    }
  }
  if (static_cast<int>(roots.size()) < count)
    throw ConvergenceError("associated_spectrum: found " +
                           std::to_string(roots.size()) + " of " +
                           std::to_string(count) + " requested roots");

  std::sort(roots.begin(), roots.end(),
            [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  roots.resize(static_cast<size_t>(count));

  std::vector<AssociatedEigenvalue> out;
  for (cplx E : roots) {
    RaySpec r = ray;
    if (r.radius <= 0.0)
      r.radius = resolve_radius(coeffs, m, E, ray.angle,
                                std::max(1e-12, 0.1 * ray.rel_tol));
    AssociatedEigenvalue ae;
    ae.E = E;
    ae.bc = bc;
    ae.signed_im = (omega2 * E).imag();
    ae.residual = probe(E, r).residual;
    out.push_back(ae);
  }
  return out;
}

double product_residual(cplx lambda, int m,
                        std::span<const AssociatedEigenvalue> associated,
                        int truncation) {
  if (truncation < 1 ||
      associated.size() < static_cast<size_t>(truncation))
    throw InvalidSpecError(
        "product_residual: associated list shorter than truncation");
  const cplx omega2 = unit_root(m, 2);
  const cplx lbar = std::conj(lambda);
  double log_prod = 0.0;
  for (int j = 0; j < truncation; ++j) {
    const cplx e = omega2 * associated[static_cast<size_t>(j)].E;
    const cplx den = e - lbar;
    if (std::abs(den) < 1e-12 * (1.0 + std::abs(lambda)))
      throw PoleError("product_residual: conj(lambda) hits omega^2 E_j");
    log_prod += std::log(std::abs(e - lambda)) - std::log(std::abs(den));
  }
  return std::abs(log_prod);
}

}  // namespace ptspec
