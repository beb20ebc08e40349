#include "kg/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "kg/quadrature.hpp"
#include "kg/weights.hpp"

namespace kg {

namespace {

constexpr double kFourPi = 4.0 * 3.141592653589793238462643383279502884;

// Centered first difference with Dirichlet ghosts.
VectorXcd d1(const VectorXcd& u, double h) {
  const Eigen::Index n = u.size();
  VectorXcd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex lo = i == 0 ? Complex(0, 0) : u[i - 1];
    const Complex hi = i + 1 == n ? Complex(0, 0) : u[i + 1];
    out[i] = (hi - lo) / (2.0 * h);
  }
  return out;
}

// (Delta + zeta) psi in reduced form: u'' + zeta u.
VectorXcd helmholtz_defect(const VectorXcd& u, double h, Complex zeta) {
  const Eigen::Index n = u.size();
  VectorXcd out(n);
  const double ih2 = 1.0 / (h * h);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex lo = i == 0 ? Complex(0, 0) : u[i - 1];
    const Complex hi = i + 1 == n ? Complex(0, 0) : u[i + 1];
    out[i] = (hi - 2.0 * u[i] + lo) * ih2 + zeta * u[i];
  }
  return out;
}

// Reduced profile of grad psi: r psi' = u' - u/r.
VectorXcd gradient_profile(const RadialGrid& g, const VectorXcd& u) {
  VectorXcd du = d1(u, g.h);
  for (int i = 0; i < g.n; ++i) du[i] -= u[i] / g.r[i];
  return du;
}

double h0_norm(const RadialGrid& g, const VectorXcd& u, double sigma) {
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i)
    acc += std::pow(1.0 + g.r[i] * g.r[i], sigma) * std::norm(u[i]);
  return std::sqrt(kFourPi * g.h * acc);
}

}  // namespace

DecayFit verify_a1(const GridPtr& grid, int k, int l, int s, double sigma,
                   const std::vector<double>& sweep,
                   const PowerIterationOptions& opts, Samples* samples_out) {
  if (k < 0 || k > 2) throw InvalidConfigError("verify_a1: k must be 0..2");
  const bool l_ok = (k == 0) ? (l >= -1 && l <= 2) : (l >= -1 && l <= 1);
  if (!l_ok) throw InvalidConfigError("verify_a1: l out of range for this k");
  if (!(sigma > 0.5 + k)) throw HypothesisError("verify_a1 requires sigma > 1/2 + k");
  if (sweep.size() < 4) throw InsufficientDataError("verify_a1: need at least 4 sweep points");

  const SineBasis& basis = sine_basis(grid);
  const VectorXd q0 = VectorXd::Zero(grid->n);
  Samples samples;
  for (double x : sweep) {
    const Complex kappa(x, 1.0);
    const Complex zeta = kappa * kappa;
    const TridiagResolvent r(grid, q0, zeta);
    Op deriv = op_scale(Complex(std::tgamma(k + 1.0), 0.0), op_power(r.as_op(), k + 1));
    const double norm = operator_norm(
        op_weight_sandwich(basis, WeightSpec{s, sigma}, WeightSpec{s + l, -sigma}, deriv),
        opts);
    samples.emplace_back(std::abs(zeta), norm);
  }
  if (samples_out) *samples_out = samples;
  double alo = samples.front().first, ahi = samples.front().first;
  for (const auto& [x, y] : samples) {
    alo = std::min(alo, x);
    ahi = std::max(ahi, x);
  }
  return fit_power_law(samples, alo * (1 - 1e-12), ahi * (1 + 1e-12));
}

RatioReport verify_a2(const std::vector<RadialProfile>& profiles, double sigma,
                      const std::vector<Complex>& zetas) {
  if (!(sigma > 0.5)) throw HypothesisError("verify_a2 requires sigma > 1/2");
  RatioReport rep;
  for (size_t p = 0; p < profiles.size(); ++p) {
    const RadialGrid& g = *profiles[p].grid;
    const VectorXcd grad = gradient_profile(g, profiles[p].values);
    const double num = h0_norm(g, grad, -sigma);
    for (const Complex& zeta : zetas) {
      const double den = h0_norm(g, helmholtz_defect(profiles[p].values, g.h, zeta), sigma);
      ++rep.n_samples;
      if (den <= 0.0) continue;
      const double ratio = num / den;
      rep.samples.push_back({static_cast<int>(p), zeta, ratio});
      if (ratio > rep.sup) {
        rep.sup = ratio;
        rep.argmax_zeta = zeta;
        rep.argmax_profile = static_cast<int>(p);
      }
    }
  }
  return rep;
}

RatioReport verify_a3(const std::vector<RadialProfile>& profiles, int l, double delta,
                      const std::vector<Complex>& zetas) {
  if (l != 0 && l != 1) throw InvalidConfigError("verify_a3: l must be 0 or 1");
  for (const Complex& z : zetas)
    if (std::abs(z) < 1.0) throw HypothesisError("verify_a3 requires |zeta| >= 1");
  RatioReport rep;
  for (size_t p = 0; p < profiles.size(); ++p) {
    const RadialGrid& g = *profiles[p].grid;
    const double lhs = weighted_norm(profiles[p], WeightSpec{l, delta});
    const VectorXcd grad = gradient_profile(g, profiles[p].values);
    const double grad_norm = h0_norm(g, grad, delta);
    for (const Complex& zeta : zetas) {
      const double den =
          std::pow(std::abs(zeta), -0.5 * (1 - l)) *
          (h0_norm(g, helmholtz_defect(profiles[p].values, g.h, zeta), delta) + grad_norm);
      ++rep.n_samples;
      if (den <= 0.0) continue;
      const double ratio = lhs / den;
      rep.samples.push_back({static_cast<int>(p), zeta, ratio});
      if (ratio > rep.sup) {
        rep.sup = ratio;
        rep.argmax_zeta = zeta;
        rep.argmax_profile = static_cast<int>(p);
      }
    }
  }
  return rep;
}

double a4_pointwise_sup(int l) {
  if (l != 0 && l != 1) throw InvalidConfigError("a4_pointwise_sup: l must be 0 or 1");
  const double moduli[] = {1.0, 10.0, 1e2, 1e3, 1e4};
  double sup = 0.0;
  for (double rho : moduli) {
    for (int ray = 0; ray < 8; ++ray) {
      const double arg = 2.0 * M_PI * ray / 8.0;
      const Complex zeta = rho * Complex(std::cos(arg), std::sin(arg));
      for (int i = 0; i <= 10000; ++i) {
        const double xi = 0.01 * i;
        const double xi2 = xi * xi;
        const double lhs = (1.0 + (l == 0 ? 1.0 : xi)) * (1.0 + (l == 0 ? 1.0 : xi));
        const double denom = std::norm(Complex(xi2, 0.0) - zeta) + xi2;
        const double val = lhs * std::pow(rho, 1.0 - l) / denom;
        sup = std::max(sup, val);
      }
    }
  }
  return sup;
}

double lavine_residual(const GridPtr& grid, const RadialProfile& profile, Complex zeta) {
  if (zeta.imag() == 0.0 && zeta.real() >= 0.0)
    throw InvalidConfigError("lavine_residual: zeta must avoid [0, inf)");
  const VectorXd q0 = VectorXd::Zero(grid->n);
  const TridiagResolvent r(grid, q0, zeta, Side::none, BoundaryClosure::dirichlet);
  const VectorXcd& u = profile.values;
  const double h = grid->h;

  // generator D = r d/dr - 1 on reduced profiles
  auto dgen = [&](const VectorXcd& x) {
    VectorXcd out = d1(x, h);
    for (int i = 0; i < grid->n; ++i) out[i] = grid->r[i] * out[i] - x[i];
    return out;
  };

  const VectorXcd ru = r.solve(u);
  const VectorXcd lhs = zeta * r.solve(ru);           // zeta R0' = zeta R0^2
  const VectorXcd rhs = -ru + 0.5 * (dgen(ru) - r.solve(dgen(u)));
  const double res = h0_norm(*grid, (lhs - rhs).eval(), -1.0);
  const double scale = h0_norm(*grid, lhs, -1.0);
  return res / std::max(scale, 1e-300);
}

JensenKatoResult jensen_kato_demo(double a, const std::vector<double>& t_samples,
                                  double window_lo, double window_hi, double panel_tol,
                                  int max_depth) {
  for (double t : t_samples)
    if (t < 1.0 || t > 1000.0)
      throw InvalidConfigError("jensen_kato_demo: t samples must lie in [1, 1000]");
  const double gamma32 = 0.5 * std::sqrt(M_PI);  // Gamma(3/2)
  const double cutoff = 8.0;                     // exp(-64) tail
  const Complex iu(0.0, 1.0);

  JensenKatoResult res;
  Samples sd, sz;
  for (double t : t_samples) {
    // direct: I(t) = 2 e^{-ita} int_0^inf y^2 e^{-(1+it) y^2} dy
    const Complex direct =
        2.0 * std::exp(-iu * t * a) *
        integrate_adaptive(
            [&](double y) {
              return y * y * std::exp(-(1.0 + iu * t) * y * y);
            },
            0.0, cutoff, panel_tol, max_depth);
    const double closed = gamma32 * std::pow(1.0 + t * t, -0.75);

    // half-period route for J(t) = int_a^inf F' e^{-itw} dw, F extended by 0:
    // J = -1/2 [ int_{a-pi/t}^{a} F'(w + pi/t) e^{-itw} dw
    //          + int_{a}^{inf} (F'(w + pi/t) - F'(w)) e^{-itw} dw ]
    const double shift = M_PI / t;
    auto fprime = [&](double s) {  // F'(a + s), s > 0
      return std::exp(-s) * (0.5 / std::sqrt(s) - std::sqrt(s));
    };
    // piece 1, w = a - shift + y^2: F'(w + shift) = F'(a + y^2), dw = 2y dy
    const Complex piece1 = integrate_adaptive(
        [&](double y) {
          const double s = y * y;
          const double smooth = std::exp(-s) * (1.0 - 2.0 * s);  // F'(a+s) 2y
          return smooth * std::exp(-iu * t * (a - shift + s));
        },
        0.0, std::sqrt(shift), panel_tol, max_depth);
    // piece 2, w = a + y^2
    const Complex piece2 = integrate_adaptive(
        [&](double y) {
          const double s = y * y;
          const double smooth = std::exp(-s) * (1.0 - 2.0 * s);  // F'(a+s) 2y
          const Complex shifted = fprime(s + shift) * 2.0 * y;
          return (shifted - smooth) * std::exp(-iu * t * (a + s));
        },
        0.0, cutoff, panel_tol, max_depth);
    const Complex zyg = -0.5 * (piece1 + piece2);

    res.t.push_back(t);
    res.direct_abs.push_back(std::abs(direct));
    res.closed_abs.push_back(closed);
    res.zygmund_abs.push_back(std::abs(zyg));
    res.max_rel_err =
        std::max(res.max_rel_err, std::abs(std::abs(direct) - closed) / closed);
    // the same integral via parts: J = i t I(t)
    res.zygmund_consistency =
        std::max(res.zygmund_consistency,
                 std::abs(std::abs(zyg) - t * std::abs(direct)) /
                     std::max(t * std::abs(direct), 1e-300));
    sd.emplace_back(t, std::abs(direct));
    sz.emplace_back(t, std::abs(zyg));
  }
  res.fit_direct = fit_power_law(sd, window_lo, window_hi);
  res.fit_zygmund = fit_power_law(sz, window_lo, window_hi);
  return res;
}

}  // namespace kg
