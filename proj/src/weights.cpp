#include "kg/weights.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "kg/errors.hpp"

namespace kg {

namespace {

constexpr double kFourPi = 4.0 * 3.141592653589793238462643383279502884;

VectorXd bracket_powers(const RadialGrid& g, double sigma) {
  VectorXd w(g.n);
  for (int i = 0; i < g.n; ++i) w[i] = std::pow(1.0 + g.r[i] * g.r[i], 0.5 * sigma);
  return w;
}

VectorXcd smoothing_multiplier(const SineBasis& basis, double s_half) {
  const VectorXd& lam = basis.laplacian_eigenvalues();
  VectorXcd m(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k)
    m[k] = Complex(std::pow(1.0 + lam[k], s_half), 0.0);
  return m;
}

}  // namespace

WeightSpec make_weight(int s, double sigma) {
  if (s < -1 || s > 2)
    throw InvalidConfigError("weight order s must lie in {-1, 0, 1} (2 for the high-order estimates)");
  return WeightSpec{s, sigma};
}

VectorXcd apply_weight_map(const SineBasis& basis, WeightSpec w, const VectorXcd& x) {
  VectorXcd y = x;
  if (w.s != 0)
    y = basis.apply_spectral_multiplier(smoothing_multiplier(basis, 0.5 * w.s), y);
  if (w.sigma != 0.0)
    y.array() *= bracket_powers(basis.grid(), w.sigma).array();
  return y;
}

VectorXcd apply_weight_map_adjoint(const SineBasis& basis, WeightSpec w,
                                   const VectorXcd& x) {
  VectorXcd y = x;
  if (w.sigma != 0.0)
    y.array() *= bracket_powers(basis.grid(), w.sigma).array();
  if (w.s != 0)
    y = basis.apply_spectral_multiplier(smoothing_multiplier(basis, 0.5 * w.s), y);
  return y;
}

VectorXcd apply_weight_map_inverse(const SineBasis& basis, WeightSpec w,
                                   const VectorXcd& x) {
  VectorXcd y = x;
  if (w.sigma != 0.0)
    y.array() *= bracket_powers(basis.grid(), -w.sigma).array();
  if (w.s != 0)
    y = basis.apply_spectral_multiplier(smoothing_multiplier(basis, -0.5 * w.s), y);
  return y;
}

VectorXcd apply_weight_map_inverse_adjoint(const SineBasis& basis, WeightSpec w,
                                           const VectorXcd& x) {
  VectorXcd y = x;
  if (w.s != 0)
    y = basis.apply_spectral_multiplier(smoothing_multiplier(basis, -0.5 * w.s), y);
  if (w.sigma != 0.0)
    y.array() *= bracket_powers(basis.grid(), -w.sigma).array();
  return y;
}

double weighted_norm(const RadialProfile& p, WeightSpec w) {
  const SineBasis& basis = sine_basis(p.grid);
  const VectorXcd y = apply_weight_map(basis, w, p.values);
  return std::sqrt(kFourPi * p.grid->h) * y.norm();
}

double energy_norm(const KgState& s, double sigma) {
  return weighted_norm(RadialProfile{s.grid, s.u}, WeightSpec{1, sigma}) +
         weighted_norm(RadialProfile{s.grid, s.v}, WeightSpec{0, sigma});
}

double quadratic_energy_norm(const VectorXcd& u_hat, const VectorXcd& v_hat,
                             const VectorXd& omega, double measure) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < u_hat.size(); ++k)
    acc += std::norm(v_hat[k]) + omega[k] * omega[k] * std::norm(u_hat[k]);
  return std::sqrt(measure * acc);
}

// ---------------------------------------------------------------------------

Op op_identity(Eigen::Index n) {
  return Op{n, n, [](const VectorXcd& x) { return x; },
            [](const VectorXcd& x) { return x; }};
}

Op op_zero(Eigen::Index rows, Eigen::Index cols) {
  return Op{rows, cols,
            [rows](const VectorXcd&) { return VectorXcd::Zero(rows).eval(); },
            [cols](const VectorXcd&) { return VectorXcd::Zero(cols).eval(); }};
}

Op op_from_matrix(const Eigen::MatrixXcd& m) {
  auto mat = std::make_shared<Eigen::MatrixXcd>(m);
  return Op{m.rows(), m.cols(),
            [mat](const VectorXcd& x) { return (*mat * x).eval(); },
            [mat](const VectorXcd& x) { return (mat->adjoint() * x).eval(); }};
}

Op op_diagonal(const VectorXcd& d) {
  auto diag = std::make_shared<VectorXcd>(d);
  return Op{d.size(), d.size(),
            [diag](const VectorXcd& x) { return (diag->array() * x.array()).matrix().eval(); },
            [diag](const VectorXcd& x) {
              return (diag->array().conjugate() * x.array()).matrix().eval();
            }};
}

Op op_scale(Complex c, Op a) {
  return Op{a.rows, a.cols,
            [c, a](const VectorXcd& x) { return (c * a.apply(x)).eval(); },
            [c, a](const VectorXcd& x) { return (std::conj(c) * a.apply_h(x)).eval(); }};
}

Op op_add(Op a, Op b) {
  return Op{a.rows, a.cols,
            [a, b](const VectorXcd& x) { return (a.apply(x) + b.apply(x)).eval(); },
            [a, b](const VectorXcd& x) { return (a.apply_h(x) + b.apply_h(x)).eval(); }};
}

Op op_sub(Op a, Op b) {
  return Op{a.rows, a.cols,
            [a, b](const VectorXcd& x) { return (a.apply(x) - b.apply(x)).eval(); },
            [a, b](const VectorXcd& x) { return (a.apply_h(x) - b.apply_h(x)).eval(); }};
}

Op op_compose(Op a, Op b) {
  return Op{a.rows, b.cols,
            [a, b](const VectorXcd& x) { return a.apply(b.apply(x)); },
            [a, b](const VectorXcd& x) { return b.apply_h(a.apply_h(x)); }};
}

Op op_power(Op a, int p) {
  Op out = a;
  for (int i = 1; i < p; ++i) out = op_compose(a, out);
  return out;
}

Op op_block2(Op a11, Op a12, Op a21, Op a22) {
  const Eigen::Index n = a11.cols;
  const Eigen::Index m = a11.rows;
  auto fwd = [=](const VectorXcd& x) {
    VectorXcd top = x.head(n), bot = x.tail(n);
    VectorXcd out(2 * m);
    out.head(m) = a11.apply(top) + a12.apply(bot);
    out.tail(m) = a21.apply(top) + a22.apply(bot);
    return out;
  };
  auto adj = [=](const VectorXcd& x) {
    VectorXcd top = x.head(m), bot = x.tail(m);
    VectorXcd out(2 * n);
    out.head(n) = a11.apply_h(top) + a21.apply_h(bot);
    out.tail(n) = a12.apply_h(top) + a22.apply_h(bot);
    return out;
  };
  return Op{2 * m, 2 * n, fwd, adj};
}

Op op_weight_sandwich(const SineBasis& basis, WeightSpec from, WeightSpec to, Op a) {
  auto fwd = [&basis, from, to, a](const VectorXcd& x) {
    return apply_weight_map(basis, to, a.apply(apply_weight_map_inverse(basis, from, x)));
  };
  auto adj = [&basis, from, to, a](const VectorXcd& x) {
    return apply_weight_map_inverse_adjoint(
        basis, from, a.apply_h(apply_weight_map_adjoint(basis, to, x)));
  };
  return Op{a.rows, a.cols, fwd, adj};
}

Op op_energy_weight_sandwich(const SineBasis& basis, double sigma_from,
                             double sigma_to, Op a) {
  const Eigen::Index n = basis.grid().n;
  enum class Mode { fwd, fwd_inv, adj, adj_inv };
  auto map = [&basis, n](double sigma, const VectorXcd& x, Mode mode) {
    VectorXcd out(2 * n);
    const WeightSpec w1{1, sigma}, w0{0, sigma};
    auto piece = [&](WeightSpec w, const VectorXcd& part) {
      switch (mode) {
        case Mode::fwd: return apply_weight_map(basis, w, part);
        case Mode::fwd_inv: return apply_weight_map_inverse(basis, w, part);
        case Mode::adj: return apply_weight_map_adjoint(basis, w, part);
        case Mode::adj_inv: return apply_weight_map_inverse_adjoint(basis, w, part);
      }
      return part;
    };
    out.head(n) = piece(w1, x.head(n).eval());
    out.tail(n) = piece(w0, x.tail(n).eval());
    return out;
  };
  auto fwd = [=, &basis](const VectorXcd& x) {
    return map(sigma_to, a.apply(map(sigma_from, x, Mode::fwd_inv)), Mode::fwd);
  };
  auto adj = [=, &basis](const VectorXcd& x) {
    return map(sigma_from, a.apply_h(map(sigma_to, x, Mode::adj)), Mode::adj_inv);
  };
  return Op{a.rows, a.cols, fwd, adj};
}

namespace {

double operator_norm_scalar(const Op& a, const PowerIterationOptions& opts) {
  VectorXcd v = VectorXcd::Constant(a.cols, Complex(1.0, 0.0));
  v /= v.norm();
  double sigma_prev = -1.0;
  double gap = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    const VectorXcd w = a.apply(v);
    const double sigma = w.norm();
    if (sigma < 1e-150) return 0.0;  // zero (or numerically zero) operator
    VectorXcd v_next = a.apply_h((w / sigma).eval());
    const double vn = v_next.norm();
    if (vn < 1e-150) return 0.0;
    v = v_next / vn;
    gap = std::abs(sigma - sigma_prev);
    if (sigma_prev >= 0.0 && gap <= opts.tol * sigma + opts.abs_tol) return sigma;
    sigma_prev = sigma;
  }
  throw NumericalFailureError("operator_norm: power iteration did not converge", gap);
}

double operator_norm_block(const Op& a, const PowerIterationOptions& opts) {
  const Eigen::Index n = a.cols;
  const int b = std::min<Eigen::Index>(opts.block, n);
  Eigen::MatrixXcd v(n, b);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < b; ++j)
      v(i, j) = Complex(std::cos(0.37 * (j + 1) * (i + 1)),
                        std::sin(0.21 * (j + 1) * (i + 2)));
  v = Eigen::HouseholderQR<Eigen::MatrixXcd>(v).householderQ() *
      Eigen::MatrixXcd::Identity(n, b);
  double sigma_prev = -1.0;
  double gap = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    Eigen::MatrixXcd w(a.rows, b);
    for (int j = 0; j < b; ++j) w.col(j) = a.apply(v.col(j));
    const Eigen::MatrixXcd gram = w.adjoint() * w;  // b x b
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    const double sigma = std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
    if (sigma < 1e-150) return 0.0;
    Eigen::MatrixXcd v_next(n, b);
    for (int j = 0; j < b; ++j) v_next.col(j) = a.apply_h(w.col(j));
    v = Eigen::HouseholderQR<Eigen::MatrixXcd>(v_next).householderQ() *
        Eigen::MatrixXcd::Identity(n, b);
    gap = std::abs(sigma - sigma_prev);
    if (sigma_prev >= 0.0 && gap <= opts.tol * sigma + opts.abs_tol) return sigma;
    sigma_prev = sigma;
  }
  throw NumericalFailureError("operator_norm: block iteration did not converge", gap);
}

}  // namespace

double operator_norm(const Op& a, const PowerIterationOptions& opts) {
  return opts.block > 1 ? operator_norm_block(a, opts) : operator_norm_scalar(a, opts);
}

double operator_norm_weighted(const LinOp& a, WeightSpec from, WeightSpec to,
                              const GridPtr& grid, const PowerIterationOptions& opts) {
  if (a.matrix.rows() != grid->n || a.matrix.cols() != grid->n)
    throw InvalidConfigError("operator_norm_weighted: matrix does not match grid");
  const SineBasis& basis = sine_basis(grid);
  return operator_norm(op_weight_sandwich(basis, from, to, op_from_matrix(a.matrix)),
                       opts);
}

}  // namespace kg
