#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kg/schrodinger.hpp"
#include "kg/util.hpp"

using namespace kg;

namespace {

// Transcendental oracle for the square-well s-wave bound state:
// k cot(k a) = -sqrt(v0 - k^2), zeta = k^2 - v0.
double square_well_zeta_oracle(double v0, double a) {
  auto f = [&](double k) {
    return k * std::cos(k * a) / std::sin(k * a) + std::sqrt(v0 - k * k);
  };
  double lo = M_PI / (2.0 * a) + 1e-12;
  double hi = std::min(M_PI / a, std::sqrt(v0)) - 1e-12;
  REQUIRE(f(lo) > 0.0);
  REQUIRE(f(hi) < 0.0);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double k = 0.5 * (lo + hi);
  return k * k - v0;
}

PotentialSpec well(double v0, double a = 1.0) {
  return PotentialSpec{PotentialKind::square_well, v0, a, 4.0, +1};
}

}  // namespace

TEST_CASE("condition (V) validation") {
  auto g = make_grid(40.0, 399);
  PotentialSpec alg{PotentialKind::algebraic, 1.0, 1.0, 2.5, +1};
  CHECK_THROWS_AS(SchrodingerOp(g, alg), InvalidConfigError);
  alg.beta = 3.5;
  CHECK_NOTHROW(SchrodingerOp(g, alg));
  const ConditionVReport rep = check_condition_v(alg, *g);
  CHECK(rep.beta == 3.5);
  CHECK(rep.constant > 0.0);
}

TEST_CASE("assemble: free case has positive spectrum") {
  auto g = make_grid(30.0, 299);
  const SchrodingerOp h(g, well(0.0));
  CHECK(h.eigenvalues()[0] > 0.0);
  const SpectrumResult spec = negative_spectrum(h, 1.0);
  CHECK(spec.bound_states.empty());
  CHECK_FALSE(spec.threshold_flag);
}

TEST_CASE("square well V0 = 4: one bound state matching the oracle") {
  auto g = make_grid(60.0, 1199);
  const SchrodingerOp h(g, well(4.0));
  CHECK(h.eigenvalues()[0] < 0.0);
  const SpectrumResult spec = negative_spectrum(h, 1.0);
  REQUIRE(spec.bound_states.size() == 1);
  const double zeta_true = square_well_zeta_oracle(4.0, 1.0);
  CHECK(zeta_true == doctest::Approx(-0.407).epsilon(0.01));
  CHECK(std::abs(spec.bound_states[0].zeta - zeta_true) < 0.02);
  CHECK(spec.bound_states[0].residual <= 1e-8);
  CHECK_FALSE(spec.threshold_flag);
}

TEST_CASE("square well V0 = 1: no bound state") {
  auto g = make_grid(60.0, 599);
  const SchrodingerOp h(g, well(1.0));
  CHECK(negative_spectrum(h, 1.0).bound_states.empty());
}

TEST_CASE("regular case detectors") {
  auto g = make_grid(40.0, 799);

  SUBCASE("V = 0 is regular with b = 1 and smin = 1") {
    const RegularCaseReport rep = regular_case_test(well(0.0), g);
    CHECK(rep.shooting_b == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.smin == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.is_regular);
    CHECK(rep.detectors_agree);
    CHECK(rep.node_count == 0);
  }

  SUBCASE("resonant coupling pi^2/4 is singular, neighbours are not") {
    const double vres = M_PI * M_PI / 4.0;
    const RegularCaseReport at = regular_case_test(well(vres), g);
    const RegularCaseReport below = regular_case_test(well(2.2), g);
    const RegularCaseReport above = regular_case_test(well(2.7), g);
    CHECK(std::abs(at.shooting_b) < 1e-2);
    CHECK(at.smin * 100.0 < below.smin);
    CHECK(at.smin * 100.0 < above.smin);
    CHECK(below.is_regular);
    CHECK(above.is_regular);
  }

  SUBCASE("V0 = 4 is regular despite the bound state") {
    const RegularCaseReport rep = regular_case_test(well(4.0), g);
    CHECK(rep.is_regular);
    CHECK(rep.detectors_agree);
    CHECK(std::abs(rep.shooting_b) > 1e-3);
  }

  SUBCASE("tail window must clear the potential support") {
    PotentialSpec wide = well(1.0, 35.0);
    CHECK_THROWS_AS(regular_case_test(wide, g), InvalidConfigError);
  }
}

TEST_CASE("Sturm oscillation: node count equals the bound-state count") {
  auto g = make_grid(60.0, 1199);
  for (double v0 : {0.5, 1.0, 4.0, 9.0, 20.0}) {
    const SchrodingerOp h(g, well(v0));
    const SpectrumResult spec = negative_spectrum(h, 100.0);  // large m: count all
    const VectorXd u = shooting_solution(h.q(), *g);
    int nodes = 0;
    double prev = 0.0;
    const double tol = 1e-12 * u.cwiseAbs().maxCoeff();
    for (int i = 0; i < g->n; ++i) {
      if (std::abs(u[i]) <= tol) continue;
      if (prev != 0.0 && std::signbit(u[i]) != std::signbit(prev)) ++nodes;
      prev = u[i];
    }
    CHECK(nodes == static_cast<int>(spec.bound_states.size()));
  }
}

TEST_CASE("coupling scan locates the resonance and the detectors agree") {
  auto g = make_grid(40.0, 799);
  const CouplingScanResult scan = scan_square_well_coupling(g, 1.0, 0.5 * 2.0, 2.0 * 2.0, 50);
  CHECK(std::abs(scan.resonance_v0 - M_PI * M_PI / 4.0) < 0.02);
  CHECK(scan.disagreements_off_resonance == 0);
  CHECK(scan.smin_dip_factor >= 100.0);
}

TEST_CASE("perturbed resolvent: inverse identity, near-singular refusal, symmetry") {
  auto g = make_grid(40.0, 399);
  const SchrodingerOp h(g, well(4.0));

  RadialProfile f = gaussian_profile(g, 1.5, 3.0);
  const LinOp r = resolvent_perturbed(h, Complex(-2.0, 0.0));
  const VectorXcd sol = r.matrix * f.values;
  // apply (H - zeta) with the Robin closure on the last row
  const double ih2 = 1.0 / (g->h * g->h);
  const Complex kappa = sqrt_branch(Complex(-2.0, 0.0), Side::none);
  VectorXcd back(g->n);
  for (int i = 0; i < g->n; ++i) {
    Complex acc = (2.0 * ih2 + h.q()[i] + 2.0) * sol[i];
    if (i > 0) acc -= ih2 * sol[i - 1];
    if (i + 1 < g->n)
      acc -= ih2 * sol[i + 1];
    else
      acc -= ih2 / (1.0 - Complex(0, 1) * kappa * g->h) * sol[i];
    back[i] = acc;
  }
  CHECK((back - f.values).norm() < 1e-8 * f.values.norm());

  // refusal within tolerance of an eigenvalue
  const double zeta1 = h.eigenvalues()[0];
  CHECK_THROWS_AS(resolvent_perturbed(h, Complex(zeta1 + 1e-12, 0.0)), NearSingularError);

  // complex symmetry R^T = R of the discrete-mode matrix
  const LinOp rc = resolvent_perturbed(h, Complex(-1.0, 0.5));
  CHECK((rc.matrix - rc.matrix.transpose()).cwiseAbs().maxCoeff() <
        1e-10 * rc.matrix.cwiseAbs().maxCoeff());
}

TEST_CASE("V = 0 perturbed resolvent equals the free discrete mode") {
  auto g = make_grid(30.0, 299);
  const SchrodingerOp h(g, well(0.0));
  const TridiagResolvent rp = h.resolvent(Complex(-1.5, 0.2));
  const VectorXd q0 = VectorXd::Zero(g->n);
  const TridiagResolvent rf(g, q0, Complex(-1.5, 0.2));
  RadialProfile f = gaussian_profile(g, 1.5);
  CHECK((rp.solve(f.values) - rf.solve(f.values)).norm() <
        1e-12 * rf.solve(f.values).norm());
}

TEST_CASE("second resolvent identity R - R0 = R0 V R") {
  auto g = make_grid(40.0, 599);
  const SchrodingerOp h(g, well(4.0));
  const Complex zeta(-1.0, 0.5);
  const TridiagResolvent r = h.resolvent(zeta, Side::none, BoundaryClosure::dirichlet);
  const VectorXd q0 = VectorXd::Zero(g->n);
  const TridiagResolvent r0(g, q0, zeta, Side::none, BoundaryClosure::dirichlet);
  RadialProfile f = gaussian_profile(g, 1.5);
  const VectorXcd lhs = r.solve(f.values) - r0.solve(f.values);
  // with H = -D2 + Q and Q = -V: R - R0 = -R0 Q R = +R0 V R
  const VectorXcd rhs = r0.solve((h.v().array() * r.solve(f.values).array()).matrix());
  CHECK((lhs - rhs).norm() < 1e-8 * lhs.norm());
}

TEST_CASE("perturbed threshold scan slopes 1/2 - k") {
  auto g = make_grid(120.0, 1199);
  const SchrodingerOp h(g, well(4.0));
  const auto deltas = geometric_sweep(1e-4, 1e-2, 8);
  const DecayFit k1 =
      scan_perturbed_resolvent_asymptotics(h, ScanRegime::threshold, 1, 0, 0, 2.0, deltas);
  CHECK(std::abs(k1.slope + 0.5) < 0.1);
  const DecayFit k2 =
      scan_perturbed_resolvent_asymptotics(h, ScanRegime::threshold, 2, 0, 0, 3.0, deltas);
  CHECK(std::abs(k2.slope + 1.5) < 0.1);
}

TEST_CASE("threshold scan refuses a resonant potential") {
  auto g = make_grid(60.0, 599);
  // work at the grid's own resonant coupling so the shooting slope is truly 0
  const CouplingScanResult scan = scan_square_well_coupling(g, 1.0, 2.2, 2.7, 20);
  const SchrodingerOp h(g, well(scan.resonance_v0));
  const auto deltas = geometric_sweep(1e-4, 1e-2, 6);
  CHECK_THROWS_AS(
      scan_perturbed_resolvent_asymptotics(h, ScanRegime::threshold, 1, 0, 0, 2.0, deltas),
      HypothesisError);
}

TEST_CASE("perturbed high-energy scan exponents -(1 - l + k)/2") {
  auto g = make_grid(30.0, 2999);
  const SchrodingerOp h(g, well(4.0));
  const auto xs = geometric_sweep(10.0, 100.0, 8);
  const DecayFit l1 =
      scan_perturbed_resolvent_asymptotics(h, ScanRegime::high_energy, 0, 0, 1, 1.0, xs);
  CHECK(std::abs(l1.slope - 0.0) < 0.1);
  const DecayFit lm1 =
      scan_perturbed_resolvent_asymptotics(h, ScanRegime::high_energy, 0, 1, -1, 1.0, xs);
  CHECK(std::abs(lm1.slope + 1.0) < 0.1);
}
