#ifndef KG_KG_DYNAMICS_HPP
#define KG_KG_DYNAMICS_HPP

#include <memory>
#include <vector>

#include "kg/free_kg.hpp"
#include "kg/schrodinger.hpp"

namespace kg {

// Generator of the perturbed Klein-Gordon flow. Requires every mode frequency
// Omega_k^2 = lambda_k + m^2 to be positive; a bound state at or below -m^2
// makes the point spectrum non-real and construction refuses.
class KgGenerator {
 public:
  KgGenerator(std::shared_ptr<const SchrodingerOp> h, double m);

  double m() const { return m_; }
  const GridPtr& grid() const { return h_->grid(); }
  const SchrodingerOp& schrodinger() const { return *h_; }
  std::shared_ptr<const SchrodingerOp> schrodinger_ptr() const { return h_; }

  // Bound states of H (zeta_j < 0) and the point spectrum
  // Sigma = { +-sqrt(m^2 + zeta_j) }, ascending.
  const SpectrumResult& bound_spectrum() const { return bound_; }
  const std::vector<double>& point_spectrum() const { return sigma_; }

  const VectorXd& mode_frequencies() const { return omega_; }

  KgState evolve(const KgState& state, double t) const;
  // Hermitian adjoint of evolve(., t) in the plain stacked inner product.
  KgState evolve_adjoint(const KgState& state, double t) const;

  double discrete_energy(const KgState& state) const;

  // The block generator [[0, i], [-i(H+m^2), 0]] as a matrix-free operator.
  Op hamiltonian_op() const;

  // Repeated sampling of one trajectory: the datum is transformed to the
  // eigenbasis once, each sample costs one diagonal rotation plus the
  // back-transform.
  class EvolutionSampler {
   public:
    KgState at(double t) const;

   private:
    friend class KgGenerator;
    const KgGenerator* gen_ = nullptr;
    GridPtr grid_;
    VectorXcd uh0_, vh0_;
  };

  EvolutionSampler sampler(const KgState& state) const;

 private:
  std::shared_ptr<const SchrodingerOp> h_;
  double m_;
  SpectrumResult bound_;
  std::vector<double> sigma_;
  VectorXd omega_;
};

// One Riesz projector: the canonical contour-quadrature construction plus the
// rank-one residue form built from the eigenpair, kept as a cross-check.
struct RieszProjector {
  double omega_j = 0.0;
  int bound_index = 0;
  double contour_radius = 0.0;
  Op contour;
  Op residue;
};

class ProjectorSet {
 public:
  ProjectorSet(GridPtr grid, std::vector<RieszProjector> pj);

  const std::vector<RieszProjector>& projectors() const { return pj_; }
  bool empty() const { return pj_.empty(); }

  KgState project_point(const KgState& s) const;       // P_d = sum P_J
  KgState project_continuous(const KgState& s) const;  // P_c = 1 - P_d

  Op pd_op() const;
  Op pc_op() const;

 private:
  GridPtr grid_;
  std::vector<RieszProjector> pj_;
};

// Builds every P_J by trapezoidal contour quadrature of the block resolvent
// on a circle of half the minimal spectral gap, with the residue form
// alongside. Throws ContourError if the gaps collapse.
ProjectorSet riesz_projectors(const KgGenerator& gen, int contour_nodes = 64);

// Projector-algebra diagnostics (operator norms of P^2 - P, P_J P_K,
// commutation with the generator, contour vs residue distance).
struct ProjectorAlgebraReport {
  double idempotence = 0.0;          // max_J ||P_J^2 - P_J||
  double cross = 0.0;                // max_{J != K} ||P_J P_K||
  double commutator = 0.0;           // max_J ||H P_J - omega_J P_J||
  double contour_vs_residue = 0.0;   // max_J ||P_J^contour - P_J^residue||
};

ProjectorAlgebraReport projector_algebra_report(const KgGenerator& gen,
                                                const ProjectorSet& proj,
                                                const PowerIterationOptions& opts = {});

// Time series of the weighted norm of the continuous component, its power
// fit, and the relative variation of the conserved energy of the point part.
struct DecaySeries {
  std::vector<double> t;
  std::vector<double> norm_c;  // ||P_c Psi(t)|| in the energy pair with weight -sigma
  std::vector<double> norm_d;  // conserved quadratic energy of P_d Psi(t)
  DecayFit fit;
  double pd_rel_variation = 0.0;
};

DecaySeries measure_perturbed_decay(const KgGenerator& gen, const ProjectorSet& proj,
                                    const KgState& psi0, double sigma,
                                    const std::vector<double>& t_samples,
                                    double window_lo, double window_hi);

// L(F_sigma, F_{-sigma}) norm of e^{-itH} P_c sampled in t by power iteration
// (each product is evolve + project + weight maps), plus the power fit.
DecayFit operator_decay_scan(const KgGenerator& gen, const ProjectorSet& proj,
                             double sigma, const std::vector<double>& t_samples,
                             double window_lo, double window_hi,
                             const PowerIterationOptions& opts = {1e-5, 2000},
                             Samples* samples_out = nullptr);

}  // namespace kg

#endif
