#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ptspec/asymptotics.hpp"
#include "ptspec/eigensolve.hpp"
#include "ptspec/errors.hpp"
#include "ptspec/stokes.hpp"
#include "ptspec/sweep.hpp"

using namespace ptspec;

TEST_CASE("stokes: |Ctilde| = 1 for real coefficients, independent of lambda") {
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  RaySpec ray;
  for (int m : {3, 4, 5}) {
    std::vector<double> a(static_cast<size_t>(m - 1));
    for (auto& c : a) c = u(rng);
    const PotentialSpec spec(m, a);
    const StokesData s1 = stokes_multipliers(spec, cplx{1.0, 2.0}, ray);
    CHECK(std::abs(std::abs(s1.Ctilde) - 1.0) < 1e-4);
    const StokesData s2 = stokes_multipliers(spec, cplx{5.0, -3.0}, ray);
    CHECK(std::abs(s1.Ctilde - s2.Ctilde) < 1e-4);
    CHECK(s1.phi0 == doctest::Approx(std::arg(s1.Ctilde)));
  }
}

TEST_CASE("stokes: Ctilde = -omega for the bare odd-degree potential") {
  RaySpec ray;
  for (int m : {3, 5}) {
    const PotentialSpec spec(m, std::vector<double>(m - 1, 0.0));
    const StokesData sd = stokes_multipliers(spec, cplx{2.0, 0.5}, ray);
    CHECK(std::abs(sd.Ctilde + omega(m)) < 1e-8);
  }
}

TEST_CASE("eigencondition: harmonic zeros via the shooting path") {
  const PotentialSpec spec(2, {0.0});
  RaySpec ray;
  for (double lambda : {1.0, 3.0, 5.0}) {
    const auto pt = detail::eigen_point(spec, cplx{lambda, 0.0}, ray);
    CHECK(pt.residual < 1e-8);
  }
  // and between the zeros the condition is far from zero
  CHECK(detail::eigen_point(spec, cplx{2.0, 0.0}, ray).residual > 1e-3);
}

TEST_CASE("eigencondition: exact zero mode of the boundary QES quartic") {
  const PotentialSpec spec(4, {0.0, 0.0, 2.0});
  RaySpec ray;
  CHECK(detail::eigen_point(spec, cplx{0.0, 0.0}, ray).residual < 1e-8);
}

TEST_CASE("find_eigenvalues: m=2 analytic and shooting cross-check") {
  for (double a1 : {0.0, 1.0}) {
    const PotentialSpec spec(2, {a1});
    const auto analytic = find_eigenvalues(spec, 4);
    FindOptions shoot;
    shoot.force_shooting = true;
    const auto shot = find_eigenvalues(spec, 4, std::nullopt, {}, shoot);
    REQUIRE(analytic.eigenvalues.size() == 4);
    REQUIRE(shot.eigenvalues.size() == 4);
    for (int i = 0; i < 4; ++i) {
      const double exact = 2.0 * (i + 1) - 1.0 + 0.25 * a1 * a1;
      CHECK(std::abs(analytic.eigenvalues[i].lambda.real() - exact) < 1e-12);
      CHECK(std::abs(shot.eigenvalues[i].lambda - cplx{exact, 0.0}) <
            1e-6 * exact);
    }
  }
}

TEST_CASE("find_eigenvalues: bare cubic spectrum against the asymptotic law") {
  const PotentialSpec spec(3, {0.0, 0.0});
  const auto rep = find_eigenvalues(spec, 8);
  REQUIRE(rep.eigenvalues.size() == 8);
  CHECK(rep.complete);
  CHECK(rep.window_count == rep.refined_count);
  double prev = 0.0;
  for (const Eigenvalue& ev : rep.eigenvalues) {
    CHECK(ev.classification == Classification::Real);
    CHECK(ev.lambda.real() > prev);
    CHECK(ev.residual < 1e-8);
    prev = ev.lambda.real();
  }
  // WKB ratio approaches 1 from above for the pure cubic
  const double r8 =
      rep.eigenvalues[7].lambda.real() / asymptotic_eigenvalue(3, 8);
  CHECK(r8 > 0.999);
  CHECK(r8 < 1.01);
  // stable solver values (confirmed by the radius-growth verification)
  CHECK(rep.eigenvalues[0].lambda.real() ==
        doctest::Approx(1.1562670720).epsilon(1e-7));
  CHECK(rep.eigenvalues[1].lambda.real() ==
        doctest::Approx(4.1092287528).epsilon(1e-7));
}

TEST_CASE("find_eigenvalues: QES boundary quartic has a zero ground state") {
  const PotentialSpec spec(4, {0.0, 0.0, 2.0});
  const auto rep = find_eigenvalues(spec, 6);
  REQUIRE(rep.eigenvalues.size() == 6);
  CHECK(std::abs(rep.eigenvalues[0].lambda) < 1e-6);
  for (size_t i = 1; i < rep.eigenvalues.size(); ++i) {
    CHECK(rep.eigenvalues[i].classification == Classification::Real);
    CHECK(rep.eigenvalues[i].lambda.real() > 0.0);
  }
}

TEST_CASE("find_eigenvalues: broken PT phase has a conjugate pair") {
  const PotentialSpec spec(3, {0.0, 5.0});
  const auto rep = find_eigenvalues(spec, 6);
  REQUIRE(rep.eigenvalues.size() == 6);
  int pair_members = 0;
  for (const Eigenvalue& ev : rep.eigenvalues)
    if (ev.classification == Classification::ComplexPairMember)
      ++pair_members;
  CHECK(pair_members >= 2);
  // zero set is closed under conjugation
  for (const Eigenvalue& ev : rep.eigenvalues) {
    if (ev.classification != Classification::ComplexPairMember) continue;
    bool has_conj = false;
    for (const Eigenvalue& other : rep.eigenvalues)
      if (std::abs(other.lambda - std::conj(ev.lambda)) <
          1e-6 * std::max(1.0, std::abs(ev.lambda)))
        has_conj = true;
    CHECK(has_conj);
  }
  // residual of the mismatch vanishes at the conjugate point too
  RaySpec ray;
  const cplx pair = rep.eigenvalues[0].lambda;
  CHECK(detail::eigen_point(spec, std::conj(pair), ray).residual < 1e-8);
}

TEST_CASE("associated_spectrum: bare cubic against the half-line oracle") {
  const PotentialSpec spec(3, {0.0, 0.0});
  const auto assoc =
      associated_spectrum(spec, BoundaryCondition::Dirichlet, 4);
  const auto oracle = oracles::halfline_dirichlet(3, 4);
  REQUIRE(assoc.size() == 4);
  REQUIRE(oracle.size() == 4);
  for (size_t j = 0; j < 4; ++j) {
    CHECK(std::abs(assoc[j].E.real() + oracle[j]) <
          1e-6 * std::max(1.0, oracle[j]));
    CHECK(std::abs(assoc[j].E.imag()) < 1e-6 * std::max(1.0, oracle[j]));
  }
}

TEST_CASE("associated_spectrum: witness specs satisfy the sign theorem") {
  for (const PotentialSpec& spec :
       {PotentialSpec(3, {1.0, -1.0}), PotentialSpec(4, {1.0, 0.0, -2.0})}) {
  for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}) {
    const auto assoc = associated_spectrum(spec, bc, 4);
    REQUIRE(assoc.size() == 4);
    double prev_abs = 0.0;
    for (const auto& ae : assoc) {
      CHECK(ae.signed_im <= 1e-6);
      CHECK(std::abs(ae.E) > prev_abs);
      prev_abs = std::abs(ae.E);
      CHECK(ae.residual < 1e-8);
    }
    // roots hug the negative real axis
    for (const auto& ae : assoc)
      CHECK(std::abs(ae.E.imag()) / std::abs(ae.E) < 0.15);
  }
  }
}

TEST_CASE("product_residual: exact for real lambda, positive off the axis") {
  const PotentialSpec spec(3, {1.0, -1.0});
  const auto assoc =
      associated_spectrum(spec, BoundaryCondition::Dirichlet, 6);
  CHECK(product_residual(cplx{2.5, 0.0}, 3, assoc, 6) == 0.0);
  CHECK(product_residual(cplx{2.5, 1.0}, 3, assoc, 6) > 1e-3);
  CHECK_THROWS_AS(product_residual(cplx{1.0, 0.0}, 3, assoc, 7),
                  InvalidSpecError);
  const cplx pole = std::conj(unit_root(3, 2) * assoc[0].E);
  CHECK_THROWS_AS(product_residual(pole, 3, assoc, 6), PoleError);
}

TEST_CASE("sweep: no events when the main-theorem hypothesis holds") {
  // a = (beta, -gamma), gamma = 1 >= 0: all eigenvalues stay real as beta
  // moves; trajectories are continuous.
  const PotentialSpec spec(3, {0.0, -1.0});
  SweepOptions so;
  const SweepResult res = sweep_coefficient(spec, 1, -2.0, 2.0, 7, 4, so);
  CHECK(res.events.empty());
  for (const Trajectory& tr : res.trajectories) {
    for (const Classification& c : tr.classes)
      CHECK(c == Classification::Real);
    for (size_t i = 0; i + 1 < tr.values.size(); ++i)
      CHECK(std::abs(tr.values[i + 1] - tr.values[i]) < 2.0);
  }
}

TEST_CASE("sweep: the lowest pair coalesces once on the way to gamma = -6") {
  const PotentialSpec spec(3, {0.0, 0.0});
  SweepOptions so;
  const SweepResult res = sweep_coefficient(spec, 2, 0.0, 6.0, 16, 2, so);
  REQUIRE(res.events.size() == 1);
  CHECK(!res.events[0].ambiguous);
  CHECK(res.events[0].param_lo >= 2.0);
  CHECK(res.events[0].param_hi <= 6.0);
}

TEST_CASE("sweep input validation") {
  const PotentialSpec spec(3, {0.0, 0.0});
  CHECK_THROWS_AS(sweep_coefficient(spec, 3, 0.0, 1.0, 5, 2, {}),
                  InvalidSpecError);
  CHECK_THROWS_AS(sweep_coefficient(spec, 1, 0.0, 1.0, 1, 2, {}),
                  InvalidSpecError);
}
