#include "kg/schrodinger.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace kg {

namespace {
constexpr double kFourPi = 4.0 * 3.141592653589793238462643383279502884;
}

struct SchrodingerOp::SpectrumCache {
  VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

SchrodingerOp::SchrodingerOp(GridPtr grid, PotentialSpec pot)
    : grid_(std::move(grid)), pot_(pot) {
  check_condition_v(pot_, *grid_);
  v_ = potential_values(pot_, *grid_);
  q_ = -v_;
}

VectorXcd SchrodingerOp::apply(const VectorXcd& u) const {
  const int n = grid_->n;
  const double ih2 = 1.0 / (grid_->h * grid_->h);
  VectorXcd out(n);
  for (int i = 0; i < n; ++i) {
    Complex acc = (2.0 * ih2 + q_[i]) * u[i];
    if (i > 0) acc -= ih2 * u[i - 1];
    if (i + 1 < n) acc -= ih2 * u[i + 1];
    out[i] = acc;
  }
  return out;
}

Op SchrodingerOp::as_op() const {
  const Eigen::Index n = grid_->n;
  // real symmetric, so the adjoint application coincides
  auto self = [this](const VectorXcd& x) { return apply(x); };
  return Op{n, n, self, self};
}

void SchrodingerOp::ensure_spectrum() const {
  if (cache_) return;
  const int n = grid_->n;
  const double ih2 = 1.0 / (grid_->h * grid_->h);
  VectorXd diag(n), sub(n - 1);
  for (int i = 0; i < n; ++i) diag[i] = 2.0 * ih2 + q_[i];
  sub.setConstant(-ih2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw NumericalFailureError("tridiagonal eigensolve failed", 0.0);
  auto cache = std::make_shared<SpectrumCache>();
  cache->eigenvalues = es.eigenvalues();
  cache->eigenvectors = es.eigenvectors();
  cache_ = std::move(cache);
}

const VectorXd& SchrodingerOp::eigenvalues() const {
  ensure_spectrum();
  return cache_->eigenvalues;
}

const Eigen::MatrixXd& SchrodingerOp::eigenvectors() const {
  ensure_spectrum();
  return cache_->eigenvectors;
}

TridiagResolvent SchrodingerOp::resolvent(Complex zeta, Side side,
                                          BoundaryClosure closure) const {
  return TridiagResolvent(grid_, q_, zeta, side, closure);
}

SpectrumResult negative_spectrum(const SchrodingerOp& op, double m) {
  const VectorXd& lam = op.eigenvalues();
  const double scale = std::max(std::abs(lam[0]), std::abs(lam[lam.size() - 1]));
  const double tol_edge = 1e-10 * scale;
  SpectrumResult res;
  const double measure = kFourPi * op.grid()->h;
  for (Eigen::Index j = 0; j < lam.size() && lam[j] < -tol_edge; ++j) {
    BoundState bs;
    bs.zeta = lam[j];
    const VectorXd psi = op.eigenvectors().col(j);  // l2-normalized
    bs.profile = psi / std::sqrt(measure);
    const VectorXcd r = op.apply(psi.cast<Complex>()) - bs.zeta * psi.cast<Complex>();
    bs.residual = r.norm();
    if (bs.zeta <= -m * m) res.threshold_flag = true;
    res.bound_states.push_back(std::move(bs));
  }
  return res;
}

VectorXd shooting_solution(const VectorXd& q, const RadialGrid& grid) {
  // Numerov for u'' = q u from u(0) = 0, u'(0) = 1; O(h^4) including the
  // series start at the first node.
  const int n = grid.n;
  const double h = grid.h, h2 = h * h;
  VectorXd u(n);
  u[0] = h * (1.0 + h2 * q[0] / 6.0);
  double um1 = 0.0;       // value at the origin
  double qm1 = q[0];      // q(0) only multiplies the zero value
  double u0 = u[0], q0 = q[0];
  for (int i = 1; i < n; ++i) {
    const double qp1 = q[i];
    const double up1 = (2.0 * u0 * (1.0 + 5.0 * h2 * q0 / 12.0) -
                        um1 * (1.0 - h2 * qm1 / 12.0)) /
                       (1.0 - h2 * qp1 / 12.0);
    u[i] = up1;
    um1 = u0;
    u0 = up1;
    qm1 = q0;
    q0 = qp1;
  }
  return u;
}

namespace {

// Smallest singular value of a dense real matrix by inverse power iteration
// on (B^T B)^{-1} through one LU factorization.
double smallest_singular_value(const Eigen::MatrixXd& b) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
  VectorXd x = VectorXd::Constant(b.rows(), 1.0);
  x /= x.norm();
  double mu_prev = 0.0;
  for (int it = 0; it < 200; ++it) {
    VectorXd y = lu.solve(x);
    y = lu.transpose().solve(y).eval();
    const double mu = y.norm();  // -> 1/smin^2
    if (mu < 1e-300) return std::numeric_limits<double>::infinity();
    x = y / mu;
    if (it > 2 && std::abs(mu - mu_prev) <= 1e-12 * mu) {
      return 1.0 / std::sqrt(mu);
    }
    mu_prev = mu;
  }
  return 1.0 / std::sqrt(mu_prev);
}

int count_sign_changes(const VectorXd& u) {
  int count = 0;
  const double tol = 1e-12 * u.cwiseAbs().maxCoeff();
  double prev = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) <= tol) continue;
    if (prev != 0.0 && std::signbit(u[i]) != std::signbit(prev)) ++count;
    prev = u[i];
  }
  return count;
}

}  // namespace

RegularCaseReport regular_case_test(const PotentialSpec& pot, const GridPtr& grid,
                                    const RegularCaseTolerances& tol) {
  const VectorXd v = potential_values(pot, *grid);
  const VectorXd q = -v;

  // Tail window must lie beyond the effective potential support.
  const double window_lo = tol.tail_fraction * grid->r_max;
  double pot_range = 0.0;
  const double vmax = v.cwiseAbs().maxCoeff();
  for (int i = grid->n - 1; i >= 0; --i)
    if (std::abs(v[i]) > 1e-10 * std::max(vmax, 1.0)) {
      pot_range = grid->r[i];
      break;
    }
  if (pot_range >= window_lo)
    throw InvalidConfigError("regular_case_test: tail window overlaps the potential support");

  RegularCaseReport rep;

  // Detector A: zero-energy shooting, tail fit u ~ alpha + b r.
  const VectorXd u = shooting_solution(q, *grid);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int mpts = 0;
  for (int i = 0; i < grid->n; ++i) {
    if (grid->r[i] < window_lo) continue;
    sx += grid->r[i];
    sy += u[i];
    sxx += grid->r[i] * grid->r[i];
    sxy += grid->r[i] * u[i];
    ++mpts;
  }
  const double det = mpts * sxx - sx * sx;
  rep.shooting_b = (mpts * sxy - sx * sy) / det;
  rep.shooting_alpha = (sy * sxx - sx * sxy) / det;
  rep.node_count = count_sign_changes(u);

  // Detector B: smallest singular value of 1 + A0 Q, kernel min(r, s).
  const int n = grid->n;
  Eigen::MatrixXd bmat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      bmat(i, j) = std::min(grid->r[i], grid->r[j]) * q[j] * grid->h + (i == j ? 1.0 : 0.0);
  rep.smin = smallest_singular_value(bmat);

  const bool regular_a = std::abs(rep.shooting_b) > tol.tol_b;
  const bool regular_b = rep.smin > tol.tol_s;
  rep.is_regular = regular_a && regular_b;
  rep.detectors_agree = (regular_a == regular_b);
  rep.margin = rep.smin - tol.tol_s;
  return rep;
}

LinOp resolvent_perturbed(const SchrodingerOp& op, Complex zeta, Side side,
                          double eigen_tol) {
  const VectorXd& lam = op.eigenvalues();
  for (Eigen::Index j = 0; j < lam.size(); ++j) {
    const double dist = std::abs(Complex(lam[j], 0.0) - zeta);
    if (dist < eigen_tol)
      throw NearSingularError("resolvent_perturbed: zeta within tolerance of an eigenvalue",
                              1.0 / std::max(dist, 1e-300));
  }
  const TridiagResolvent r = op.resolvent(zeta, side);
  const int n = op.grid()->n;
  Eigen::MatrixXcd inv(n, n);
  VectorXcd e = VectorXcd::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    inv.col(j) = r.solve(e);
    e[j] = 0.0;
  }
  return LinOp{std::move(inv), {}, {}};
}

DecayFit scan_perturbed_resolvent_asymptotics(const SchrodingerOp& op, ScanRegime regime,
                                              int k, int s, int l, double sigma,
                                              const std::vector<double>& sweep,
                                              const PowerIterationOptions& opts,
                                              Samples* samples_out) {
  if (k < 0 || k > 2) throw InvalidConfigError("scan: derivative order must be 0..2");
  if (!(sigma > 0.5 + k))
    throw HypothesisError("resolvent scan requires sigma > 1/2 + k");
  if (sweep.size() < 4) throw InsufficientDataError("scan: need at least 4 sweep points");

  WeightSpec from, to;
  if (regime == ScanRegime::threshold) {
    // Threshold asymptotics presuppose the regular case.
    const VectorXd u = shooting_solution(op.q(), *op.grid());
    const double b_tail = (u[op.grid()->n - 1] - u[op.grid()->n - 2]) / op.grid()->h;
    if (std::abs(b_tail) < 1e-3)
      throw HypothesisError("threshold scan refused: potential is not in the regular case");
    from = WeightSpec{-1, sigma};
    to = WeightSpec{1, -sigma};
  } else {
    if (s != 0 && s != 1) throw InvalidConfigError("high-energy scan: s must be 0 or 1");
    if (l < -1 || l > 1) throw InvalidConfigError("high-energy scan: l must be -1, 0 or 1");
    if (s + l != 0 && s + l != 1)
      throw InvalidConfigError("high-energy scan: s + l must be 0 or 1");
    from = WeightSpec{s, sigma};
    to = WeightSpec{s + l, -sigma};
  }

  const SineBasis& basis = sine_basis(op.grid());
  Samples samples;
  for (double x : sweep) {
    Complex zeta;
    double abscissa;
    if (regime == ScanRegime::threshold) {
      if (!(x > 0.0)) throw InvalidConfigError("threshold sweep: delta must be positive");
      zeta = Complex(-x, 0.0);
      abscissa = x;
    } else {
      const Complex kappa(x, 1.0);
      zeta = kappa * kappa;
      abscissa = std::abs(zeta);
    }
    const TridiagResolvent r = op.resolvent(zeta);
    Op deriv = op_scale(Complex(std::tgamma(k + 1.0), 0.0), op_power(r.as_op(), k + 1));
    const double norm = operator_norm(op_weight_sandwich(basis, from, to, deriv), opts);
    samples.emplace_back(abscissa, norm);
  }
  if (samples_out) *samples_out = samples;
  double alo = samples.front().first, ahi = samples.front().first;
  for (const auto& [x, y] : samples) {
    alo = std::min(alo, x);
    ahi = std::max(ahi, x);
  }
  return fit_power_law(samples, alo * (1 - 1e-12), ahi * (1 + 1e-12));
}

CouplingScanResult scan_square_well_coupling(const GridPtr& grid, double a, double v0_lo,
                                             double v0_hi, int steps,
                                             const RegularCaseTolerances& tol) {
  if (steps < 3) throw InvalidConfigError("coupling scan needs at least 3 steps");
  CouplingScanResult res;

  auto shoot_b = [&](double v0) {
    PotentialSpec pot{PotentialKind::square_well, v0, a, 4.0, +1};
    const VectorXd q = -potential_values(pot, *grid);
    const VectorXd u = shooting_solution(q, *grid);
    // tail slope from the last two nodes (the potential vanishes there)
    return (u[grid->n - 1] - u[grid->n - 2]) / grid->h;
  };

  for (int i = 0; i < steps; ++i) {
    const double v0 = v0_lo + (v0_hi - v0_lo) * i / (steps - 1);
    PotentialSpec pot{PotentialKind::square_well, v0, a, 4.0, +1};
    const RegularCaseReport rep = regular_case_test(pot, grid, tol);
    CouplingScanPoint pt;
    pt.v0 = v0;
    pt.b = rep.shooting_b;
    pt.smin = rep.smin;
    pt.regular_shooting = std::abs(rep.shooting_b) > tol.tol_b;
    pt.regular_operator = rep.smin > tol.tol_s;
    res.points.push_back(pt);
  }

  // Bisection on the sign change of the shooting slope.
  int bracket = -1;
  for (size_t i = 1; i < res.points.size(); ++i)
    if (res.points[i - 1].b * res.points[i].b < 0.0) {
      bracket = static_cast<int>(i);
      break;
    }
  if (bracket < 0)
    throw NumericalFailureError("coupling scan: no resonance bracket found", 0.0);
  double lo = res.points[bracket - 1].v0, hi = res.points[bracket].v0;
  double blo = res.points[bracket - 1].b;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double bm = shoot_b(mid);
    if (bm * blo <= 0.0)
      hi = mid;
    else {
      lo = mid;
      blo = bm;
    }
  }
  res.resonance_v0 = 0.5 * (lo + hi);

  for (size_t i = 0; i < res.points.size(); ++i) {
    const auto& pt = res.points[i];
    const bool near_res = std::abs(static_cast<int>(i) - bracket) <= 1 ||
                          std::abs(static_cast<int>(i) - (bracket - 1)) <= 1;
    if (pt.regular_shooting != pt.regular_operator) {
      ++res.disagreements;
      if (!near_res) ++res.disagreements_off_resonance;
    }
  }

  // dip factor: smin at the scan edges against smin at the located resonance
  const PotentialSpec pot_res{PotentialKind::square_well, res.resonance_v0, a, 4.0, +1};
  const double smin_res = regular_case_test(pot_res, grid, tol).smin;
  const double smin_edges = std::min(res.points.front().smin, res.points.back().smin);
  res.smin_dip_factor = smin_edges / std::max(smin_res, 1e-300);
  return res;
}

}  // namespace kg
