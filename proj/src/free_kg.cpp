#include "kg/free_kg.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <vector>

#include "kg/bessel.hpp"
#include "kg/errors.hpp"

namespace kg {

// ---------------------------------------------------------------------------
// branch bookkeeping and tridiagonal resolvents

Complex sqrt_branch(Complex zeta, Side side) {
  if (zeta.imag() == 0.0 && zeta.real() > 0.0) {
    const double root = std::sqrt(zeta.real());
    switch (side) {
      case Side::plus: return Complex(root, 0.0);
      case Side::minus: return Complex(-root, 0.0);
      case Side::none:
        throw BranchAmbiguityError(
            "spectral parameter on (0, inf) requires a +i0/-i0 side tag");
    }
  }
  Complex k = std::sqrt(zeta);
  if (k.imag() < 0.0) k = -k;
  return k;
}

TridiagResolvent::TridiagResolvent(GridPtr grid, const VectorXd& q, Complex zeta,
                                   Side side, BoundaryClosure closure)
    : grid_(std::move(grid)), zeta_(zeta) {
  const int n = grid_->n;
  const double h = grid_->h;
  const double ih2 = 1.0 / (h * h);
  if (q.size() != n) throw InvalidConfigError("resolvent: potential length mismatch");

  Complex last_diag = Complex(2.0 * ih2 + q[n - 1], 0.0) - zeta;
  if (closure == BoundaryClosure::robin_outgoing) {
    // Eliminate the boundary value through u' = i k u at r_max:
    // u_{n+1} = u_n / (1 - i k h).
    const Complex kappa = sqrt_branch(zeta, side);
    last_diag -= ih2 / (1.0 - Complex(0.0, 1.0) * kappa * h);
  }

  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(3 * n);
  for (int i = 0; i < n; ++i) {
    const Complex d = (i == n - 1) ? last_diag : Complex(2.0 * ih2 + q[i], 0.0) - zeta;
    trip.emplace_back(i, i, d);
    if (i + 1 < n) {
      trip.emplace_back(i, i + 1, Complex(-ih2, 0.0));
      trip.emplace_back(i + 1, i, Complex(-ih2, 0.0));
    }
  }
  Eigen::SparseMatrix<Complex> mat(n, n);
  mat.setFromTriplets(trip.begin(), trip.end());
  lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<Complex>>>();
  lu_->compute(mat);
  if (lu_->info() != Eigen::Success)
    throw NumericalFailureError("resolvent factorization failed", 0.0);
}

VectorXcd TridiagResolvent::solve(const VectorXcd& f) const { return lu_->solve(f); }

VectorXcd TridiagResolvent::solve_adjoint(const VectorXcd& f) const {
  return lu_->solve(f.conjugate()).conjugate();
}

Op TridiagResolvent::as_op() const {
  auto lu = lu_;
  const Eigen::Index n = grid_->n;
  return Op{n, n, [lu](const VectorXcd& f) { return lu->solve(f).eval(); },
            [lu](const VectorXcd& f) {
              return lu->solve(f.conjugate()).conjugate().eval();
            }};
}

Eigen::MatrixXcd free_resolvent_kernel_matrix(const RadialGrid& grid, Complex zeta,
                                              Side side) {
  const Complex kappa = sqrt_branch(zeta, side);
  const int n = grid.n;
  Eigen::MatrixXcd g(n, n);
  const Complex iu(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double lo = grid.r[j], hi = grid.r[i];
      const Complex val = std::sin(kappa * lo) * std::exp(iu * kappa * hi) / kappa;
      g(i, j) = val * grid.h;
      g(j, i) = val * grid.h;
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Klein-Gordon block resolvent derivatives

namespace {

struct PowerTerm {
  Complex coeff;
  int power;  // of R; 0 means identity
};

Op combine_powers(const Op& r, const std::vector<PowerTerm>& terms) {
  Op acc = op_zero(r.rows, r.cols);
  for (const auto& term : terms) {
    Op piece = term.power == 0 ? op_identity(r.cols) : op_power(r, term.power);
    acc = op_add(std::move(acc), op_scale(term.coeff, std::move(piece)));
  }
  return acc;
}

}  // namespace

Op kg_block_resolvent_op(Op r, Complex omega, int k) {
  const Complex iu(0.0, 1.0);
  const Complex w = omega, w2 = omega * omega, w3 = w2 * omega, w4 = w2 * w2;
  std::vector<PowerTerm> a, b, c;
  switch (k) {
    case 0:
      a = {{w, 1}};
      b = {{iu, 1}};
      c = {{-iu, 0}, {-iu * w2, 1}};
      break;
    case 1:
      a = {{1.0, 1}, {2.0 * w2, 2}};
      b = {{2.0 * iu * w, 2}};
      c = {{-2.0 * iu * w, 1}, {-2.0 * iu * w3, 2}};
      break;
    case 2:
      a = {{6.0 * w, 2}, {8.0 * w3, 3}};
      b = {{2.0 * iu, 2}, {8.0 * iu * w2, 3}};
      c = {{-2.0 * iu, 1}, {-10.0 * iu * w2, 2}, {-8.0 * iu * w4, 3}};
      break;
    default:
      throw InvalidConfigError("kg_block_resolvent_op: derivative order must be 0..2");
  }
  Op a_op = combine_powers(r, a);
  return op_block2(a_op, combine_powers(r, b), combine_powers(r, c), a_op);
}

// ---------------------------------------------------------------------------
// free propagator

ModelParams make_model(double m) {
  if (!(m > 0.0)) throw InvalidConfigError("mass m must be strictly positive");
  return ModelParams{m};
}

SpectralBands spectral_bands(const ModelParams& params) {
  return SpectralBands{-params.m, params.m};
}

FreePropagator::FreePropagator(GridPtr grid, ModelParams params)
    : grid_(std::move(grid)), params_(params), basis_(&sine_basis(grid_)) {
  const VectorXd& lam = basis_->laplacian_eigenvalues();
  omega_.resize(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k)
    omega_[k] = std::sqrt(lam[k] + params_.m * params_.m);
}

KgState FreePropagator::evolve(const KgState& state, double t) const {
  require_same_grid(*state.grid, *grid_);
  VectorXcd uh = basis_->transform(state.u);
  VectorXcd vh = basis_->transform(state.v);
  for (Eigen::Index k = 0; k < uh.size(); ++k) {
    const double w = omega_[k];
    const double c = std::cos(t * w), s = std::sin(t * w);
    const Complex u0 = uh[k], v0 = vh[k];
    uh[k] = c * u0 + s / w * v0;
    vh[k] = -w * s * u0 + c * v0;
  }
  return KgState{state.grid, basis_->transform(uh), basis_->transform(vh)};
}

double FreePropagator::discrete_energy(const KgState& state) const {
  const VectorXcd uh = basis_->transform(state.u);
  const VectorXcd vh = basis_->transform(state.v);
  return quadratic_energy_norm(uh, vh, omega_, 4.0 * M_PI * grid_->h);
}

// ---------------------------------------------------------------------------
// explicit Bessel-kernel propagator

namespace {

// Piecewise-linear evaluation of a reduced profile, zero at both endpoints
// and beyond.
class ProfileInterpolant {
 public:
  explicit ProfileInterpolant(const RadialProfile& p)
      : h_(p.grid->h), n_(p.grid->n), values_(&p.values) {}

  Complex operator()(double s) const {
    if (s <= 0.0 || s >= (n_ + 1) * h_) return Complex(0.0, 0.0);
    const double x = s / h_;
    const int j = static_cast<int>(x);  // cell [j, j+1], node index offset 1
    const double frac = x - j;
    const Complex lo = j == 0 ? Complex(0.0, 0.0) : (*values_)[j - 1];
    const Complex hi = j >= n_ ? Complex(0.0, 0.0) : (*values_)[j];
    return lo + frac * (hi - lo);
  }

 private:
  double h_;
  int n_;
  const VectorXcd* values_;
};

// Integral of u(s) weight(s) over [lo, hi], cell by cell with a two-point
// Gauss rule: exact against the piecewise-linear reconstruction of u, fourth
// order against the smooth weight factor.
template <typename F>
Complex integrate_against(const ProfileInterpolant& u, double h, double lo, double hi,
                          F&& weight) {
  if (!(hi > lo)) return Complex(0.0, 0.0);
  constexpr double kGauss = 0.28867513459481288225;  // 1/(2 sqrt(3))
  Complex acc(0.0, 0.0);
  const int cell_lo = static_cast<int>(std::floor(lo / h));
  const int cell_hi = static_cast<int>(std::ceil(hi / h));
  double a = lo;
  for (int c = cell_lo; c < cell_hi; ++c) {
    const double b = std::min(hi, (c + 1) * h);
    if (b <= a) continue;
    const double mid = 0.5 * (a + b), half = b - a;
    const double x1 = mid - half * kGauss, x2 = mid + half * kGauss;
    acc += 0.5 * half * (u(x1) * weight(x1) + u(x2) * weight(x2));
    a = b;
  }
  return acc;
}

}  // namespace

RadialProfile kernel_propagate(const RadialProfile& psi0, double t, double m) {
  if (!(t > 0.0)) throw InvalidConfigError("kernel_propagate: t must be positive");
  if (!(m > 0.0)) throw InvalidConfigError("kernel_propagate: m must be positive");
  const RadialGrid& g = *psi0.grid;
  const double supp = support_radius(psi0, 1e-13);
  if (supp + t >= g.r_max)
    throw BoundaryContaminationError(
        "kernel_propagate: support plus propagation time reaches r_max");

  const ProfileInterpolant u(psi0);
  const double h = g.h;
  VectorXcd out(g.n);

  // J0(m sqrt(t^2 - d^2)) as a function of the signed separation d; analytic
  // in d^2, so integrands stay smooth across d = 0.
  const auto front_bessel = [&](double d) { return bessel_j0(m * std::sqrt(std::max(t * t - d * d, 0.0))); };

  for (int i = 0; i < g.n; ++i) {
    const double r = g.r[i];
    // Sharp Huygens front: (1/2) int_{|r-t|}^{r+t} u0(s) ds.
    const double f_lo = std::abs(r - t), f_hi = r + t;
    const Complex front =
        0.5 * integrate_against(u, h, f_lo, std::min(f_hi, g.r_max),
                                [](double) { return 1.0; });

    // Bessel tail over s with |r-s| < t. The inner rho-integral of the
    // J1 kernel reduces to J0 boundary terms; the integrand has a kink at
    // s = t - r where min(r+s, t) switches, so the window splits there.
    const double w_lo = std::max(0.0, r - t);
    const double w_hi = std::min(r + t, g.r_max);
    const double split = t - r;
    const auto tail_weight_inside = [&](double s) {
      // r + s < t: both boundary terms present
      return Complex(front_bessel(r + s) - front_bessel(r - s), 0.0);
    };
    const auto tail_weight_cut = [&](double s) {
      // r + s >= t: upper limit clipped at rho = t where J0(0) = 1
      return Complex(1.0 - front_bessel(r - s), 0.0);
    };
    Complex tail(0.0, 0.0);
    if (split > w_lo)
      tail += integrate_against(u, h, w_lo, std::min(split, w_hi), tail_weight_inside);
    if (w_hi > std::max(split, w_lo))
      tail += integrate_against(u, h, std::max(split, w_lo), w_hi, tail_weight_cut);

    out[i] = front - 0.5 * tail;
  }
  return RadialProfile{psi0.grid, std::move(out)};
}

// ---------------------------------------------------------------------------
// free resolvents (spec-facing dense forms)

LinOp resolvent_free_schrodinger(const GridPtr& grid, Complex zeta, ResolventMode mode,
                                 Side side) {
  if (mode == ResolventMode::continuum) {
    return LinOp{free_resolvent_kernel_matrix(*grid, zeta, side), {}, {}};
  }
  const VectorXd q = VectorXd::Zero(grid->n);
  const TridiagResolvent r(grid, q, zeta, side);
  Eigen::MatrixXcd inv(grid->n, grid->n);
  VectorXcd e = VectorXcd::Zero(grid->n);
  for (int j = 0; j < grid->n; ++j) {
    e[j] = 1.0;
    inv.col(j) = r.solve(e);
    e[j] = 0.0;
  }
  return LinOp{std::move(inv), {}, {}};
}

Op resolvent_free_kg_op(const GridPtr& grid, double m, Complex omega, Side side, int k) {
  const VectorXd q = VectorXd::Zero(grid->n);
  const Complex zeta = omega * omega - m * m;
  const TridiagResolvent r(grid, q, zeta, side);
  return kg_block_resolvent_op(r.as_op(), omega, k);
}

DecayFit scan_free_resolvent_asymptotics(const GridPtr& grid, double m,
                                         ScanRegime regime, int k, double sigma,
                                         const std::vector<double>& sweep,
                                         const PowerIterationOptions& opts,
                                         Samples* samples_out) {
  if (k < 0 || k > 2) throw InvalidConfigError("scan: derivative order must be 0..2");
  if (!(sigma > 0.5 + k))
    throw HypothesisError("resolvent scan requires sigma > 1/2 + k");
  if (sweep.size() < 4) throw InsufficientDataError("scan: need at least 4 sweep points");
  const SineBasis& basis = sine_basis(grid);

  Samples samples;
  for (double x : sweep) {
    Complex omega;
    double abscissa;
    if (regime == ScanRegime::threshold) {
      if (!(x > 0.0 && x < m)) throw InvalidConfigError("threshold sweep: need 0 < delta < m");
      omega = Complex(m - x, 0.0);  // inside the spectral gap
      abscissa = x;
    } else {
      omega = Complex(x, 1.0);  // fixed unit distance from the band
      abscissa = std::abs(omega);
    }
    Op block = resolvent_free_kg_op(grid, m, omega, Side::none, k);
    const double norm =
        operator_norm(op_energy_weight_sandwich(basis, sigma, -sigma, block), opts);
    samples.emplace_back(abscissa, norm);
  }
  if (samples_out) *samples_out = samples;
  const auto [lo, hi] = std::minmax_element(sweep.begin(), sweep.end());
  double alo = *lo, ahi = *hi;
  if (regime == ScanRegime::high_energy) {
    alo = std::abs(Complex(alo, 1.0));
    ahi = std::abs(Complex(ahi, 1.0));
  }
  return fit_power_law(samples, alo * (1 - 1e-12), ahi * (1 + 1e-12));
}

}  // namespace kg
