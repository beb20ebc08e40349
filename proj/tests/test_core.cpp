#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "kg/bessel.hpp"
#include "kg/grid.hpp"
#include "kg/powerlaw.hpp"
#include "kg/sine_basis.hpp"
#include "kg/weights.hpp"

using namespace kg;

namespace {

// 40-term power-series oracle in long double, independent of the library path.
long double j1_oracle(long double x) {
  const long double half = 0.5L * x;
  long double term = half, sum = half;
  for (int k = 1; k <= 40; ++k) {
    term *= -half * half / (static_cast<long double>(k) * (k + 1));
    sum += term;
  }
  return sum;
}

constexpr double kFourPi = 4.0 * M_PI;

}  // namespace

TEST_CASE("make_grid basic arithmetic and validation") {
  auto g = make_grid(10.0, 9);
  CHECK(g->h == doctest::Approx(1.0));
  CHECK(g->r[0] == doctest::Approx(1.0));
  CHECK(g->r[8] == doctest::Approx(9.0));

  auto g2 = make_grid(120.0, 2399);
  CHECK(g2->h == doctest::Approx(0.05));

  CHECK_THROWS_AS(make_grid(0.0, 100), InvalidConfigError);
  CHECK_THROWS_AS(make_grid(10.0, 4), InvalidConfigError);
  CHECK_THROWS_AS(make_grid(-3.0, 100), InvalidConfigError);
}

TEST_CASE("sine transform matches direct summation and is involutive") {
  auto g = make_grid(7.0, 23);
  const SineBasis& basis = sine_basis(g);
  VectorXcd x(23);
  for (int i = 0; i < 23; ++i) x[i] = Complex(std::sin(0.3 * i + 0.1), 0.2 * i);

  // direct orthonormal DST
  const int n = 23;
  VectorXcd direct = VectorXcd::Zero(n);
  for (int k = 1; k <= n; ++k)
    for (int j = 1; j <= n; ++j)
      direct[k - 1] += std::sqrt(2.0 / (n + 1)) * std::sin(M_PI * j * k / (n + 1)) * x[j - 1];

  const VectorXcd fast = basis.transform(x);
  CHECK((fast - direct).norm() < 1e-12 * direct.norm());
  CHECK((basis.transform(fast) - x).norm() < 1e-12 * x.norm());
}

TEST_CASE("sine basis diagonalizes the discrete Dirichlet Laplacian") {
  auto g = make_grid(5.0, 31);
  const SineBasis& basis = sine_basis(g);
  const double ih2 = 1.0 / (g->h * g->h);
  // apply L = -D2 directly to the k-th sine mode
  const int k = 7;
  VectorXcd mode(g->n);
  for (int i = 1; i <= g->n; ++i) mode[i - 1] = std::sin(M_PI * i * k / (g->n + 1));
  VectorXcd lmode(g->n);
  for (int i = 0; i < g->n; ++i) {
    Complex acc = 2.0 * ih2 * mode[i];
    if (i > 0) acc -= ih2 * mode[i - 1];
    if (i + 1 < g->n) acc -= ih2 * mode[i + 1];
    lmode[i] = acc;
  }
  const double lambda_k = basis.laplacian_eigenvalues()[k - 1];
  CHECK((lmode - lambda_k * mode).norm() < 1e-10 * lmode.norm());
}

TEST_CASE("weighted_norm: plain L2 and single-node weight cases") {
  auto g = make_grid(20.0, 63);
  VectorXcd u = VectorXcd::Zero(g->n);
  for (int i = 0; i < g->n; ++i) u[i] = Complex(std::exp(-0.1 * i), 0.3);
  const RadialProfile p{g, u};
  const double expect = std::sqrt(kFourPi * g->h) * u.norm();
  CHECK(weighted_norm(p, {0, 0.0}) == doctest::Approx(expect).epsilon(1e-13));

  VectorXcd single = VectorXcd::Zero(g->n);
  const int node = 17;
  single[node] = Complex(0.0, 2.5);
  const double r = g->r[node];
  const double w = std::pow(1.0 + r * r, 0.5 * 1.25);
  CHECK(weighted_norm(RadialProfile{g, single}, {0, 1.25}) ==
        doctest::Approx(w * std::sqrt(kFourPi * g->h) * 2.5).epsilon(1e-13));
}

TEST_CASE("weighted_norm s=1 on the lowest Dirichlet eigenvector (eigen oracle)") {
  auto g = make_grid(10.0, 50);
  // independent dense eigensolve oracle
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(g->n, g->n);
  const double ih2 = 1.0 / (g->h * g->h);
  for (int i = 0; i < g->n; ++i) {
    lap(i, i) = 2.0 * ih2;
    if (i > 0) lap(i, i - 1) = -ih2;
    if (i + 1 < g->n) lap(i, i + 1) = -ih2;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
  const double lam1 = es.eigenvalues()[0];
  VectorXcd u = es.eigenvectors().col(0).cast<Complex>();
  const RadialProfile p{g, u};
  const double l2 = weighted_norm(p, {0, 0.0});
  CHECK(weighted_norm(p, {1, 0.0}) ==
        doctest::Approx(std::sqrt(1.0 + lam1) * l2).epsilon(1e-10));
}

TEST_CASE("energy_norm basics and grid-refinement stability") {
  auto g = make_grid(40.0, 799);
  RadialProfile psi = gaussian_profile(g, 1.5);
  const KgState zero{g, VectorXcd::Zero(g->n), VectorXcd::Zero(g->n)};
  CHECK(energy_norm(zero, 1.0) == 0.0);

  const KgState one{g, psi.values, VectorXcd::Zero(g->n)};
  CHECK(energy_norm(one, 0.0) == doctest::Approx(weighted_norm(psi, {1, 0.0})));

  auto g2 = make_grid(40.0, 1599);
  RadialProfile psi2 = gaussian_profile(g2, 1.5);
  const KgState s1{g, psi.values, psi.values};
  const KgState s2{g2, psi2.values, psi2.values};
  const double e1 = energy_norm(s1, 1.0), e2 = energy_norm(s2, 1.0);
  CHECK(std::abs(e1 - e2) / e2 < 1e-3);
}

TEST_CASE("norm homogeneity and sigma monotonicity") {
  auto g = make_grid(15.0, 60);
  VectorXcd u(g->n);
  for (int i = 0; i < g->n; ++i) u[i] = Complex(std::cos(0.2 * i), std::sin(0.15 * i));
  const RadialProfile p{g, u};
  for (int s : {-1, 0, 1}) {
    const Complex c(1.7, -2.3);
    const RadialProfile pc{g, c * u};
    const double base = weighted_norm(p, {s, 0.7});
    CHECK(std::abs(weighted_norm(pc, {s, 0.7}) - std::abs(c) * base) < 1e-12 * base);
    CHECK(weighted_norm(p, {s, 0.3}) <= weighted_norm(p, {s, 0.9}) * (1 + 1e-14));
  }
}

TEST_CASE("bessel values against series oracle and special points") {
  CHECK(bessel_j1(0.0) == 0.0);
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(std::abs(bessel_j1(1.0) - 0.4400505857) < 1e-9);
  CHECK(std::abs(bessel_j1(1.0) - static_cast<double>(j1_oracle(1.0L))) < 1e-12);
  CHECK_THROWS_AS(bessel_j0(-1.0), DomainError);
  CHECK_THROWS_AS(bessel_j1(-0.5), DomainError);
}

TEST_CASE("bessel branch overlap on [8,12] to 1e-10") {
  for (double x = 8.0; x <= 12.0; x += 0.03125) {
    CHECK(std::abs(bessel_detail::j0_series(x) - bessel_detail::j0_asymptotic(x)) <= 1e-10);
    CHECK(std::abs(bessel_detail::j1_series(x) - bessel_detail::j1_asymptotic(x)) <= 1e-10);
  }
}

TEST_CASE("bessel Wronskian combination agrees between branches") {
  auto wronskian = [](double j0, double j1, double x) {
    // J0 J1' - J0' J1 with J1' = J0 - J1/x and J0' = -J1
    return j0 * j0 + j1 * j1 - j0 * j1 / x;
  };
  for (double x = 8.0; x <= 12.0; x += 0.125) {
    const double ws = wronskian(bessel_detail::j0_series(x), bessel_detail::j1_series(x), x);
    const double wa =
        wronskian(bessel_detail::j0_asymptotic(x), bessel_detail::j1_asymptotic(x), x);
    CHECK(std::abs(ws - wa) <= 1e-10);
    // 2/(pi x) holds up to the O(x^-2) Hankel correction
    CHECK(std::abs(ws - 2.0 / (M_PI * x)) < 5e-4);
  }
}

TEST_CASE("fit_power_law recovers planted exponents") {
  Samples s;
  for (int i = 0; i < 20; ++i) {
    const double x = 10.0 * std::pow(8.0, i / 19.0);
    s.emplace_back(x, std::pow(x, -1.5));
  }
  const DecayFit f = fit_power_law(s, 10.0, 80.0);
  CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  Samples s2;
  for (int i = 0; i < 12; ++i) {
    const double x = 1.0 + i;
    s2.emplace_back(x, 3.0 * std::pow(x, -2.0));
  }
  const DecayFit f2 = fit_power_law(s2, 1.0, 12.0);
  CHECK(f2.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f2.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  Samples s3;
  for (int i = 0; i < 40; ++i) {
    const double x = 10.0 * std::pow(8.0, i / 39.0);
    s3.emplace_back(x, std::pow(x, -1.5) * (1.0 + 0.1 * std::sin(x)));
  }
  const DecayFit f3 = fit_power_law(s3, 10.0, 80.0);
  CHECK(std::abs(f3.slope + 1.5) < 0.05);
}

TEST_CASE("fit_power_law errors") {
  Samples s = {{1.0, 1.0}, {2.0, 0.5}, {3.0, 0.3}};
  CHECK_THROWS_AS(fit_power_law(s, 0.5, 3.5), InsufficientDataError);
  s.emplace_back(4.0, -0.1);
  CHECK_THROWS_AS(fit_power_law(s, 0.5, 4.5), DomainError);
}

TEST_CASE("operator_norm_weighted: identity, zero, diagonal vs SVD oracle") {
  auto g = make_grid(12.0, 50);
  const SineBasis& basis = sine_basis(g);

  LinOp ident{Eigen::MatrixXcd::Identity(g->n, g->n), {}, {}};
  CHECK(operator_norm_weighted(ident, {0, 0.7}, {0, 0.7}, g) ==
        doctest::Approx(1.0).epsilon(1e-7));

  LinOp zero{Eigen::MatrixXcd::Zero(g->n, g->n), {}, {}};
  CHECK(operator_norm_weighted(zero, {0, 1.0}, {0, -1.0}, g) == 0.0);

  // diag(<r>^-2 sigma) between (0, sigma) and (0, -sigma), sigma = 1
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(g->n, g->n);
  for (int i = 0; i < g->n; ++i)
    d(i, i) = std::pow(1.0 + g->r[i] * g->r[i], -1.0);
  const double norm = operator_norm_weighted(LinOp{d, {}, {}}, {0, 1.0}, {0, -1.0}, g);

  // dense SVD oracle of the sandwiched matrix
  Eigen::MatrixXcd m = d;
  for (int i = 0; i < g->n; ++i)
    for (int j = 0; j < g->n; ++j)
      m(i, j) *= std::pow(1.0 + g->r[i] * g->r[i], -0.5) *
                 std::pow(1.0 + g->r[j] * g->r[j], -0.5);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  CHECK(norm == doctest::Approx(svd.singularValues()[0]).epsilon(1e-7));

  // duality sanity: identity between (0, sigma) and (0, -sigma)
  const double dual = operator_norm_weighted(ident, {0, 1.0}, {0, -1.0}, g);
  CHECK(dual <= 1.0 + 1e-10);
  CHECK(dual > 0.9);
  (void)basis;
}

TEST_CASE("op adjoint consistency for composed operators") {
  auto g = make_grid(9.0, 40);
  const SineBasis& basis = sine_basis(g);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(g->n, g->n);
  for (int i = 0; i < g->n; ++i)
    for (int j = 0; j < g->n; ++j)
      a(i, j) = Complex(std::sin(0.1 * i + 0.2 * j), std::cos(0.3 * i - 0.1 * j)) /
                (1.0 + std::abs(i - j));
  Op op = op_weight_sandwich(basis, {1, 0.5}, {-1, -0.5}, op_from_matrix(a));

  VectorXcd x(g->n), y(g->n);
  for (int i = 0; i < g->n; ++i) {
    x[i] = Complex(std::cos(0.4 * i), std::sin(0.5 * i));
    y[i] = Complex(std::sin(0.2 * i), std::cos(0.7 * i));
  }
  const Complex lhs = y.dot(op.apply(x));
  const Complex rhs = op.apply_h(y).dot(x);
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
}
