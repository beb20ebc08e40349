#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "kg/free_kg.hpp"
#include "kg/util.hpp"

using namespace kg;

namespace {

KgState gaussian_state(const GridPtr& g, double width, bool velocity = false) {
  RadialProfile psi = gaussian_profile(g, width);
  if (velocity) return KgState{g, VectorXcd::Zero(g->n), psi.values};
  return KgState{g, psi.values, VectorXcd::Zero(g->n)};
}

double state_diff(const KgState& a, const KgState& b) {
  return std::sqrt((a.u - b.u).squaredNorm() + (a.v - b.v).squaredNorm()) /
         std::sqrt(a.u.squaredNorm() + a.v.squaredNorm());
}

}  // namespace

TEST_CASE("model params validation") {
  CHECK_THROWS_AS(make_model(0.0), InvalidConfigError);
  CHECK_THROWS_AS(make_model(-1.0), InvalidConfigError);
  const SpectralBands b = spectral_bands(make_model(2.0));
  CHECK(b.gap_lo == -2.0);
  CHECK(b.gap_hi == 2.0);
}

TEST_CASE("free evolution: identity, group law, inverse, energy conservation") {
  auto g = make_grid(60.0, 599);
  const FreePropagator prop(g, make_model(1.0));
  const KgState psi0 = gaussian_state(g, 1.5);

  CHECK(state_diff(prop.evolve(psi0, 0.0), psi0) < 1e-13);
  CHECK(state_diff(prop.evolve(prop.evolve(psi0, 7.0), -7.0), psi0) < 1e-12);

  const KgState a = prop.evolve(psi0, 1.0 + 2.0);
  const KgState b = prop.evolve(prop.evolve(psi0, 2.0), 1.0);
  CHECK(state_diff(a, b) < 1e-11);
  const KgState c = prop.evolve(psi0, 5.0 - 3.0);
  const KgState d = prop.evolve(prop.evolve(psi0, -3.0), 5.0);
  CHECK(state_diff(c, d) < 1e-11);

  const double e0 = prop.discrete_energy(psi0);
  for (double t : {5.0, 10.0, 50.0, 100.0})
    CHECK(std::abs(prop.discrete_energy(prop.evolve(psi0, t)) - e0) < 1e-12 * e0);
}

TEST_CASE("finite propagation speed of the lattice flow") {
  auto g = make_grid(60.0, 1199);
  const FreePropagator prop(g, make_model(1.0));
  const double r0 = 4.0;
  RadialProfile bump = bump_profile(g, r0);
  const KgState psi0{g, bump.values, VectorXcd::Zero(g->n)};
  const double t = 20.0;
  const KgState st = prop.evolve(psi0, t);
  const double peak = st.u.cwiseAbs().maxCoeff();
  // the lattice cone is soft: the amplitude falls through 1e-10 within a
  // buffer of order (h^2 t)^(1/3) past the sharp front, not within a few h
  double beyond = 0.0;
  for (int i = 0; i < g->n; ++i)
    if (g->r[i] > r0 + t + 2.0)
      beyond = std::max(beyond, std::abs(st.u[i]));
  CHECK(beyond < 1e-10 * peak);
}

TEST_CASE("free weighted decay exponent -3/2 (sigma = 2)") {
  auto g = make_grid(120.0, 1199);  // h = 0.1 is plenty for the fit
  const FreePropagator prop(g, make_model(1.0));
  const KgState psi0 = gaussian_state(g, 1.5);
  Samples samples;
  for (double t : geometric_sweep(10.0, 80.0, 16))
    samples.emplace_back(t, energy_norm(prop.evolve(psi0, t), -2.0));
  const DecayFit fit = fit_power_law(samples, 9.99, 80.01);
  CHECK(std::abs(fit.slope + 1.5) < 0.1);
}

TEST_CASE("kernel propagator: wave-equation limit at m -> 0") {
  auto g = make_grid(30.0, 599);
  RadialProfile psi0 = gaussian_profile(g, 1.2);
  const double t = 8.0;
  const RadialProfile out = kernel_propagate(psi0, t, 1e-8);

  // spherical means: u(r) = (1/2) int_{|r-t|}^{r+t} u0(s) ds; direct fine
  // trapezoid oracle on the interpolated data
  auto u0 = [&](double s) {
    if (s <= 0 || s >= g->r_max) return 0.0;
    const double x = s / g->h;
    const int j = static_cast<int>(x);
    const double frac = x - j;
    const double lo = j == 0 ? 0.0 : psi0.values[j - 1].real();
    const double hi = j >= g->n ? 0.0 : psi0.values[j].real();
    return lo + frac * (hi - lo);
  };
  double max_err = 0.0, max_val = 0.0;
  for (int i = 0; i < g->n; i += 7) {
    const double r = g->r[i];
    const double lo = std::abs(r - t), hi = r + t;
    const int steps = 4000;
    double acc = 0.0;
    for (int q = 0; q < steps; ++q) {
      const double s1 = lo + (hi - lo) * q / steps;
      const double s2 = lo + (hi - lo) * (q + 1) / steps;
      acc += 0.5 * (u0(s1) + u0(s2)) * (s2 - s1);
    }
    const double expect = 0.5 * acc;
    max_err = std::max(max_err, std::abs(out.values[i].real() - expect));
    max_val = std::max(max_val, std::abs(expect));
  }
  CHECK(max_err < 1e-6 * std::max(max_val, 1.0));
}

TEST_CASE("dual-propagator oracle at m = 1, t = 10 with refinement ratio") {
  const double r_max = 30.0, t = 10.0, m = 1.0;
  auto rel_err = [&](int n) {
    auto g = make_grid(r_max, n);
    RadialProfile psi0 = gaussian_profile(g, 2.0);
    const RadialProfile kern = kernel_propagate(psi0, t, m);
    const FreePropagator prop(g, make_model(m));
    const KgState spect = prop.evolve(KgState{g, VectorXcd::Zero(g->n), psi0.values}, t);
    return (kern.values - spect.u).norm() / spect.u.norm();
  };
  const double e1 = rel_err(599);   // h = 0.05
  const double e2 = rel_err(1199);  // h = 0.025
  CHECK(e1 <= 1e-3);
  CHECK(e1 / e2 > 3.4);
  CHECK(e1 / e2 < 4.6);
}

TEST_CASE("kernel propagator boundary contamination error") {
  auto g = make_grid(20.0, 399);
  RadialProfile psi0 = gaussian_profile(g, 1.2);
  CHECK_THROWS_AS(kernel_propagate(psi0, 18.0, 1.0), BoundaryContaminationError);
}

TEST_CASE("free Schrodinger resolvent: decay, inverse identity, cross-mode oracle") {
  auto g = make_grid(30.0, 599);

  // zeta = -1: output decays exponentially beyond the data support
  const LinOp cont = resolvent_free_schrodinger(g, Complex(-1.0, 0.0), ResolventMode::continuum);
  RadialProfile f = gaussian_profile(g, 1.0);
  const VectorXcd u = cont.matrix * f.values;
  int i10 = 0, i20 = 0;
  for (int i = 0; i < g->n; ++i) {
    if (g->r[i] <= 10.0) i10 = i;
    if (g->r[i] <= 20.0) i20 = i;
  }
  const double decay = std::abs(u[i20]) / std::abs(u[i10]);
  CHECK(decay < 1.1 * std::exp(-(g->r[i20] - g->r[i10])));

  // discrete mode is the inverse of the Robin-closed matrix
  const VectorXd q0 = VectorXd::Zero(g->n);
  const TridiagResolvent rd(g, q0, Complex(-1.0, 0.0));
  const VectorXcd sol = rd.solve(f.values);
  const double ih2 = 1.0 / (g->h * g->h);
  const Complex kappa = sqrt_branch(Complex(-1.0, 0.0), Side::none);
  VectorXcd back(g->n);
  for (int i = 0; i < g->n; ++i) {
    Complex acc = (2.0 * ih2 + 1.0) * sol[i];
    if (i > 0) acc -= ih2 * sol[i - 1];
    if (i + 1 < g->n)
      acc -= ih2 * sol[i + 1];
    else
      acc -= ih2 / (1.0 - Complex(0, 1) * kappa * g->h) * sol[i];
    back[i] = acc;
  }
  CHECK((back - f.values).norm() < 1e-8 * f.values.norm());

  // continuum vs discrete at zeta = -0.5 with second-order shrink
  auto cross_gap = [&](int n) {
    auto gg = make_grid(30.0, n);
    RadialProfile ff = gaussian_profile(gg, 1.2);
    const LinOp c = resolvent_free_schrodinger(gg, Complex(-0.5, 0.0), ResolventMode::continuum);
    const LinOp d = resolvent_free_schrodinger(gg, Complex(-0.5, 0.0), ResolventMode::discrete);
    const VectorXcd uc = c.matrix * ff.values;
    const VectorXcd ud = d.matrix * ff.values;
    return (uc - ud).norm() / ud.norm();
  };
  const double g1 = cross_gap(599), g2 = cross_gap(1199);
  CHECK(g1 <= 1e-3);
  CHECK(g1 / g2 > 3.0);
  CHECK(g1 / g2 < 5.2);
}

TEST_CASE("branch bookkeeping") {
  CHECK_THROWS_AS(sqrt_branch(Complex(2.0, 0.0), Side::none), BranchAmbiguityError);
  CHECK(sqrt_branch(Complex(4.0, 0.0), Side::plus).real() == doctest::Approx(2.0));
  CHECK(sqrt_branch(Complex(4.0, 0.0), Side::minus).real() == doctest::Approx(-2.0));
  const Complex k = sqrt_branch(Complex(-4.0, 0.0), Side::none);
  CHECK(k.real() == doctest::Approx(0.0));
  CHECK(k.imag() == doctest::Approx(2.0));
}

TEST_CASE("free KG block resolvent: inverse identity and omega = 0 structure") {
  auto g = make_grid(15.0, 60);
  const double m = 1.0;
  const Complex omega(0.0, 0.5);

  const int n = g->n;
  const double ih2 = 1.0 / (g->h * g->h);
  Eigen::MatrixXcd lap = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    lap(i, i) = 2.0 * ih2;
    if (i > 0) lap(i, i - 1) = -ih2;
    if (i + 1 < n) lap(i, i + 1) = -ih2;
  }
  Eigen::MatrixXcd h0 = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const Complex iu(0, 1);
  h0.topRightCorner(n, n) = iu * Eigen::MatrixXcd::Identity(n, n);
  h0.bottomLeftCorner(n, n) = -iu * (lap + m * m * Eigen::MatrixXcd::Identity(n, n));

  // Dirichlet scalar resolvent so the closure matches the dense assembly
  const VectorXd q0 = VectorXd::Zero(n);
  const TridiagResolvent r(g, q0, omega * omega - m * m, Side::none,
                           BoundaryClosure::dirichlet);
  const Op block = kg_block_resolvent_op(r.as_op(), omega, 0);

  RadialProfile f = gaussian_profile(g, 1.5);
  VectorXcd x(2 * n);
  x.head(n) = f.values;
  x.tail(n) = 0.3 * f.values;
  const VectorXcd y = block.apply(x);
  const VectorXcd back = (h0 - omega * Eigen::MatrixXcd::Identity(2 * n, 2 * n)) * y;
  CHECK((back - x).norm() < 1e-8 * x.norm());

  // omega = 0: blocks reduce to [[0, i R0(-m^2)], [-i, 0]]
  const TridiagResolvent r0(g, q0, Complex(-m * m, 0.0), Side::none,
                            BoundaryClosure::dirichlet);
  const Op block0 = kg_block_resolvent_op(r0.as_op(), Complex(0.0, 0.0), 0);
  const VectorXcd y0 = block0.apply(x);
  const VectorXcd top_expect = iu * r0.solve(x.tail(n));
  const VectorXcd bot_expect = -iu * x.head(n);
  CHECK((y0.head(n) - top_expect).norm() < 1e-12 * top_expect.norm());
  CHECK((y0.tail(n) - bot_expect).norm() < 1e-12 * bot_expect.norm());
}

TEST_CASE("block resolvent omega-derivatives match finite differences") {
  auto g = make_grid(15.0, 60);
  const double m = 1.0;
  const VectorXd q0 = VectorXd::Zero(g->n);
  const Complex omega(0.3, 0.4);
  RadialProfile f = gaussian_profile(g, 1.5);
  VectorXcd x(2 * g->n);
  x.head(g->n) = f.values;
  x.tail(g->n) = Complex(0.2, 0.1) * f.values;

  auto apply_at = [&](Complex w, int k) {
    const TridiagResolvent r(g, q0, w * w - m * m, Side::none,
                             BoundaryClosure::dirichlet);
    return kg_block_resolvent_op(r.as_op(), w, k).apply(x);
  };
  const double dw = 1e-5;
  for (int k : {1, 2}) {
    const VectorXcd fd =
        (apply_at(omega + dw, k - 1) - apply_at(omega - dw, k - 1)) / (2.0 * dw);
    const VectorXcd exact = apply_at(omega, k);
    CHECK((fd - exact).norm() < 1e-6 * exact.norm());
  }
}

TEST_CASE("adjoint-conjugation symmetry of the free block resolvent") {
  // R0(conj(omega))^H = K R0(omega) K^{-1} with K = diag(L + m^2, 1):
  // <y, K R0(omega) K^{-1} x> = <R0(conj omega) y, x> on test states.
  auto g = make_grid(15.0, 60);
  const double m = 1.0;
  const int n = g->n;
  const VectorXd q0 = VectorXd::Zero(n);
  const Complex omega(2.0, 0.3);

  const TridiagResolvent r_w(g, q0, omega * omega - m * m, Side::none,
                             BoundaryClosure::dirichlet);
  const TridiagResolvent r_wc(g, q0,
                              std::conj(omega) * std::conj(omega) - m * m, Side::none,
                              BoundaryClosure::dirichlet);
  const Op b_w = kg_block_resolvent_op(r_w.as_op(), omega, 0);
  const Op b_wc = kg_block_resolvent_op(r_wc.as_op(), std::conj(omega), 0);

  const double ih2 = 1.0 / (g->h * g->h);
  auto apply_l_m2 = [&](const VectorXcd& v) {
    VectorXcd out(n);
    for (int i = 0; i < n; ++i) {
      Complex acc = (2.0 * ih2 + m * m) * v[i];
      if (i > 0) acc -= ih2 * v[i - 1];
      if (i + 1 < n) acc -= ih2 * v[i + 1];
      out[i] = acc;
    }
    return out;
  };
  RadialProfile f = gaussian_profile(g, 1.5);
  VectorXcd x(2 * n), y(2 * n);
  x.head(n) = f.values;
  x.tail(n) = Complex(0.5, -0.2) * f.values;
  for (int i = 0; i < 2 * n; ++i) y[i] = Complex(std::cos(0.13 * i), std::sin(0.21 * i));

  VectorXcd kinv_x(2 * n);
  const TridiagResolvent lm2_inv(g, q0, Complex(-m * m, 0.0), Side::none,
                                 BoundaryClosure::dirichlet);
  kinv_x.head(n) = lm2_inv.solve(x.head(n));
  kinv_x.tail(n) = x.tail(n);
  VectorXcd k_rx = b_w.apply(kinv_x);
  k_rx.head(n) = apply_l_m2(k_rx.head(n).eval());
  const Complex lhs = y.dot(k_rx);
  const Complex rhs = b_wc.apply(y).dot(x);
  CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(lhs));
}

TEST_CASE("free resolvent threshold and high-energy scans") {
  auto g = make_grid(120.0, 1199);
  const double m = 1.0;

  const auto deltas = geometric_sweep(1e-4, 1e-2, 8);
  const DecayFit k1 = scan_free_resolvent_asymptotics(g, m, ScanRegime::threshold, 1,
                                                      2.0, deltas);
  CHECK(std::abs(k1.slope + 0.5) < 0.1);
  const DecayFit k2 = scan_free_resolvent_asymptotics(g, m, ScanRegime::threshold, 2,
                                                      3.0, deltas);
  CHECK(std::abs(k2.slope + 1.5) < 0.1);

  auto gf = make_grid(30.0, 2999);
  const auto xs = geometric_sweep(10.0, 100.0, 8);
  const DecayFit h0 = scan_free_resolvent_asymptotics(gf, m, ScanRegime::high_energy, 0,
                                                      1.0, xs);
  CHECK(std::abs(h0.slope) < 0.1);

  CHECK_THROWS_AS(
      scan_free_resolvent_asymptotics(g, m, ScanRegime::threshold, 2, 1.0, deltas),
      HypothesisError);
}
