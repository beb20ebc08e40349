#include "kg/kg_dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace kg {

namespace {
constexpr double kFourPi = 4.0 * 3.141592653589793238462643383279502884;
}

KgGenerator::KgGenerator(std::shared_ptr<const SchrodingerOp> h, double m)
    : h_(std::move(h)), m_(m) {
  if (!(m_ > 0.0)) throw InvalidConfigError("mass m must be strictly positive");
  const VectorXd& lam = h_->eigenvalues();
  omega_.resize(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    const double w2 = lam[k] + m_ * m_;
    if (!(w2 > 0.0))
      throw InstabilityError("KgGenerator: mode " + std::to_string(k) +
                             " has lambda + m^2 = " + std::to_string(w2) +
                             " <= 0; the point spectrum would be non-real");
    omega_[k] = std::sqrt(w2);
  }
  bound_ = negative_spectrum(*h_, m_);
  for (const auto& bs : bound_.bound_states) {
    const double w = std::sqrt(m_ * m_ + bs.zeta);
    sigma_.push_back(-w);
    sigma_.push_back(w);
  }
  std::sort(sigma_.begin(), sigma_.end());
}

KgState KgGenerator::evolve(const KgState& state, double t) const {
  require_same_grid(*state.grid, *grid());
  const Eigen::MatrixXd& s = h_->eigenvectors();
  VectorXcd uh = s.transpose() * state.u;
  VectorXcd vh = s.transpose() * state.v;
  for (Eigen::Index k = 0; k < uh.size(); ++k) {
    const double w = omega_[k];
    const double c = std::cos(t * w), sn = std::sin(t * w);
    const Complex u0 = uh[k], v0 = vh[k];
    uh[k] = c * u0 + sn / w * v0;
    vh[k] = -w * sn * u0 + c * v0;
  }
  return KgState{state.grid, s * uh, s * vh};
}

KgState KgGenerator::evolve_adjoint(const KgState& state, double t) const {
  require_same_grid(*state.grid, *grid());
  const Eigen::MatrixXd& s = h_->eigenvectors();
  VectorXcd uh = s.transpose() * state.u;
  VectorXcd vh = s.transpose() * state.v;
  // per-mode blocks are real 2x2, so the adjoint is the transpose
  for (Eigen::Index k = 0; k < uh.size(); ++k) {
    const double w = omega_[k];
    const double c = std::cos(t * w), sn = std::sin(t * w);
    const Complex u0 = uh[k], v0 = vh[k];
    uh[k] = c * u0 - w * sn * v0;
    vh[k] = sn / w * u0 + c * v0;
  }
  return KgState{state.grid, s * uh, s * vh};
}

double KgGenerator::discrete_energy(const KgState& state) const {
  const Eigen::MatrixXd& s = h_->eigenvectors();
  const VectorXcd uh = s.transpose() * state.u;
  const VectorXcd vh = s.transpose() * state.v;
  return quadratic_energy_norm(uh, vh, omega_, kFourPi * grid()->h);
}

KgGenerator::EvolutionSampler KgGenerator::sampler(const KgState& state) const {
  require_same_grid(*state.grid, *grid());
  EvolutionSampler s;
  s.gen_ = this;
  s.grid_ = state.grid;
  const Eigen::MatrixXd& vecs = h_->eigenvectors();
  s.uh0_ = vecs.transpose() * state.u;
  s.vh0_ = vecs.transpose() * state.v;
  return s;
}

KgState KgGenerator::EvolutionSampler::at(double t) const {
  const VectorXd& omega = gen_->mode_frequencies();
  VectorXcd uh(uh0_.size()), vh(vh0_.size());
  for (Eigen::Index k = 0; k < uh.size(); ++k) {
    const double w = omega[k];
    const double c = std::cos(t * w), sn = std::sin(t * w);
    uh[k] = c * uh0_[k] + sn / w * vh0_[k];
    vh[k] = -w * sn * uh0_[k] + c * vh0_[k];
  }
  const Eigen::MatrixXd& vecs = gen_->schrodinger().eigenvectors();
  return KgState{grid_, vecs * uh, vecs * vh};
}

Op KgGenerator::hamiltonian_op() const {
  const Eigen::Index n = grid()->n;
  auto h = h_;
  const double m2 = m_ * m_;
  auto fwd = [h, m2, n](const VectorXcd& x) {
    VectorXcd out(2 * n);
    const Complex iu(0.0, 1.0);
    out.head(n) = iu * x.tail(n);
    out.tail(n) = -iu * (h->apply(x.head(n)) + m2 * x.head(n));
    return out;
  };
  auto adj = [h, m2, n](const VectorXcd& x) {
    VectorXcd out(2 * n);
    const Complex iu(0.0, 1.0);
    out.head(n) = iu * (h->apply(x.tail(n)) + m2 * x.tail(n));
    out.tail(n) = -iu * x.head(n);
    return out;
  };
  return Op{2 * n, 2 * n, fwd, adj};
}

// ---------------------------------------------------------------------------

ProjectorSet::ProjectorSet(GridPtr grid, std::vector<RieszProjector> pj)
    : grid_(std::move(grid)), pj_(std::move(pj)) {}

KgState ProjectorSet::project_point(const KgState& s) const {
  VectorXcd acc = VectorXcd::Zero(2 * grid_->n);
  const VectorXcd x = stack(s);
  for (const auto& p : pj_) acc += p.contour.apply(x);
  return unstack(s.grid, acc);
}

KgState ProjectorSet::project_continuous(const KgState& s) const {
  if (pj_.empty()) return s;
  VectorXcd x = stack(s);
  VectorXcd acc = x;
  for (const auto& p : pj_) acc -= p.contour.apply(x);
  return unstack(s.grid, acc);
}

Op ProjectorSet::pd_op() const {
  Op acc = op_zero(2 * grid_->n, 2 * grid_->n);
  for (const auto& p : pj_) acc = op_add(std::move(acc), p.contour);
  return acc;
}

Op ProjectorSet::pc_op() const {
  return op_sub(op_identity(2 * grid_->n), pd_op());
}

ProjectorSet riesz_projectors(const KgGenerator& gen, int contour_nodes) {
  const GridPtr& grid = gen.grid();
  const double m = gen.m();
  const auto& sigma = gen.point_spectrum();
  std::vector<RieszProjector> pj;

  for (size_t j = 0; j < sigma.size(); ++j) {
    const double wj = sigma[j];
    // half the distance to the nearest other spectral point (incl. +-m)
    double gap = std::min(std::abs(wj - m), std::abs(wj + m));
    for (size_t k = 0; k < sigma.size(); ++k)
      if (k != j) gap = std::min(gap, std::abs(wj - sigma[k]));
    const double radius = 0.5 * gap;
    if (!(radius > 1e-8))
      throw ContourError("riesz_projectors: contour radius collapsed at omega_J = " +
                         std::to_string(wj));

    // trapezoidal contour quadrature of -(2 pi i)^{-1} oint R(omega) d omega;
    // the resolvent solves use the fixed Dirichlet-closed operator, the same
    // operator the dynamics diagonalizes.
    std::vector<Complex> omegas(contour_nodes), phases(contour_nodes);
    auto solves = std::make_shared<std::vector<TridiagResolvent>>();
    solves->reserve(contour_nodes);
    for (int qnode = 0; qnode < contour_nodes; ++qnode) {
      const double theta = 2.0 * M_PI * qnode / contour_nodes;
      const Complex e(std::cos(theta), std::sin(theta));
      const Complex omega = Complex(wj, 0.0) + radius * e;
      omegas[qnode] = omega;
      phases[qnode] = e;
      solves->emplace_back(grid, gen.schrodinger().q(), omega * omega - m * m,
                           Side::none, BoundaryClosure::dirichlet);
    }
    const Eigen::Index n2 = 2 * grid->n;
    const double weight = -radius / contour_nodes;
    auto fwd = [=](const VectorXcd& x) {
      VectorXcd acc = VectorXcd::Zero(n2);
      for (int qnode = 0; qnode < contour_nodes; ++qnode) {
        Op blk = kg_block_resolvent_op((*solves)[qnode].as_op(), omegas[qnode], 0);
        acc += weight * phases[qnode] * blk.apply(x);
      }
      return acc;
    };
    auto adj = [=](const VectorXcd& x) {
      VectorXcd acc = VectorXcd::Zero(n2);
      for (int qnode = 0; qnode < contour_nodes; ++qnode) {
        Op blk = kg_block_resolvent_op((*solves)[qnode].as_op(), omegas[qnode], 0);
        acc += std::conj(weight * phases[qnode]) * blk.apply_h(x);
      }
      return acc;
    };

    RieszProjector proj;
    proj.omega_j = wj;
    proj.bound_index = static_cast<int>(j / 2);
    proj.contour_radius = radius;
    proj.contour = Op{n2, n2, fwd, adj};

    // rank-one residue form [[1/2, i/(2w)], [-iw/2, 1/2]] (x) phi phi^T
    const auto& bs = gen.bound_spectrum().bound_states[proj.bound_index];
    auto phi = std::make_shared<VectorXd>(bs.profile * std::sqrt(kFourPi * grid->h));
    const Eigen::Index n = grid->n;
    const Complex iu(0.0, 1.0);
    const Complex p11(0.5, 0.0), p12 = iu / (2.0 * wj), p21 = -iu * wj / 2.0;
    auto res_fwd = [=](const VectorXcd& x) {
      const Complex cu = phi->cast<Complex>().dot(x.head(n));
      const Complex cv = phi->cast<Complex>().dot(x.tail(n));
      VectorXcd out(2 * n);
      out.head(n) = (p11 * cu + p12 * cv) * phi->cast<Complex>();
      out.tail(n) = (p21 * cu + p11 * cv) * phi->cast<Complex>();
      return out;
    };
    auto res_adj = [=](const VectorXcd& x) {
      const Complex cu = phi->cast<Complex>().dot(x.head(n));
      const Complex cv = phi->cast<Complex>().dot(x.tail(n));
      VectorXcd out(2 * n);
      out.head(n) = (std::conj(p11) * cu + std::conj(p21) * cv) * phi->cast<Complex>();
      out.tail(n) = (std::conj(p12) * cu + std::conj(p11) * cv) * phi->cast<Complex>();
      return out;
    };
    proj.residue = Op{n2, n2, res_fwd, res_adj};
    pj.push_back(std::move(proj));
  }
  return ProjectorSet(grid, std::move(pj));
}

ProjectorAlgebraReport projector_algebra_report(const KgGenerator& gen,
                                                const ProjectorSet& proj,
                                                const PowerIterationOptions& opts_in) {
  // the residual operators sit at the roundoff floor, where the singular
  // value flutters by ~eps per application; an absolute slack keeps the
  // stopping rule meaningful there
  PowerIterationOptions opts = opts_in;
  if (opts.abs_tol == 0.0) opts.abs_tol = 1e-12;
  ProjectorAlgebraReport rep;
  const Op h = gen.hamiltonian_op();
  for (const auto& p : proj.projectors()) {
    rep.idempotence = std::max(
        rep.idempotence,
        operator_norm(op_sub(op_compose(p.contour, p.contour), p.contour), opts));
    rep.commutator = std::max(
        rep.commutator,
        operator_norm(op_sub(op_compose(h, p.contour),
                             op_scale(Complex(p.omega_j, 0.0), p.contour)),
                      opts));
    rep.contour_vs_residue =
        std::max(rep.contour_vs_residue,
                 operator_norm(op_sub(p.contour, p.residue), opts));
    for (const auto& q : proj.projectors()) {
      if (&p == &q) continue;
      rep.cross = std::max(rep.cross,
                           operator_norm(op_compose(p.contour, q.contour), opts));
    }
  }
  return rep;
}

DecaySeries measure_perturbed_decay(const KgGenerator& gen, const ProjectorSet& proj,
                                    const KgState& psi0, double sigma,
                                    const std::vector<double>& t_samples,
                                    double window_lo, double window_hi) {
  if (!(sigma > 2.5))
    throw HypothesisError("perturbed decay measurement requires sigma > 5/2");
  {
    const VectorXd u = shooting_solution(gen.schrodinger().q(), *gen.grid());
    const double b_tail = (u[gen.grid()->n - 1] - u[gen.grid()->n - 2]) / gen.grid()->h;
    if (std::abs(b_tail) < 1e-3)
      throw HypothesisError("perturbed decay refused: potential is not in the regular case");
  }
  const double supp =
      std::max(support_radius(RadialProfile{psi0.grid, psi0.u}),
               support_radius(RadialProfile{psi0.grid, psi0.v}));
  const double t_max = *std::max_element(t_samples.begin(), t_samples.end());
  if (supp + t_max >= gen.grid()->r_max)
    throw BoundaryContaminationError(
        "decay measurement would reach the boundary: support + t_max >= r_max");

  const KgState psi_c = proj.project_continuous(psi0);
  const KgState psi_d = proj.project_point(psi0);

  DecaySeries series;
  Samples samples;
  double d0 = -1.0;
  for (double t : t_samples) {
    const KgState st = gen.evolve(psi_c, t);
    const double nc = energy_norm(st, -sigma);
    const double nd = proj.empty() ? 0.0 : gen.discrete_energy(gen.evolve(psi_d, t));
    series.t.push_back(t);
    series.norm_c.push_back(nc);
    series.norm_d.push_back(nd);
    samples.emplace_back(t, nc);
    if (!proj.empty()) {
      if (d0 < 0.0) d0 = nd;
      if (d0 > 0.0)
        series.pd_rel_variation =
            std::max(series.pd_rel_variation, std::abs(nd - d0) / d0);
    }
  }
  series.fit = fit_power_law(samples, window_lo, window_hi);
  return series;
}

DecayFit operator_decay_scan(const KgGenerator& gen, const ProjectorSet& proj,
                             double sigma, const std::vector<double>& t_samples,
                             double window_lo, double window_hi,
                             const PowerIterationOptions& opts_in, Samples* samples_out) {
  if (!(sigma > 2.5))
    throw HypothesisError("operator decay scan requires sigma > 5/2");
  // the singular values of the sandwiched flow cluster near the top, where a
  // single power vector stalls below the norm; simultaneous iteration with a
  // modest block resolves the cluster
  PowerIterationOptions opts = opts_in;
  if (opts.block <= 1) opts.block = 8;
  const SineBasis& basis = sine_basis(gen.grid());
  const Op pc = proj.pc_op();
  const Eigen::Index n2 = 2 * gen.grid()->n;
  Samples samples;
  for (double t : t_samples) {
    auto fwd = [&gen, &pc, t](const VectorXcd& x) {
      const KgState in = unstack(gen.grid(), pc.apply(x));
      return stack(gen.evolve(in, t));
    };
    auto adj = [&gen, &pc, t](const VectorXcd& x) {
      const KgState in = unstack(gen.grid(), x);
      return pc.apply_h(stack(gen.evolve_adjoint(in, t)));
    };
    Op evolve_pc{n2, n2, fwd, adj};
    const double norm =
        operator_norm(op_energy_weight_sandwich(basis, sigma, -sigma, evolve_pc), opts);
    samples.emplace_back(t, norm);
  }
  if (samples_out) *samples_out = samples;
  return fit_power_law(samples, window_lo, window_hi);
}

}  // namespace kg
