#ifndef KG_BORN_HPP
#define KG_BORN_HPP

#include <vector>

#include "kg/kg_dynamics.hpp"

namespace kg {

// The coupling block [[0, 0], [iV, 0]]: (u, v) -> (0, iVu). Nilpotent.
KgState apply_coupling(const KgState& s, const VectorXd& v_values);
Op coupling_op(const VectorXd& v_values);

// Finite Born split of the projected flow: Psi_1 free, Psi_2 the Duhamel
// convolution of the free flow against the coupling, Psi_3 the remainder by
// subtraction from P_c Psi(t).
struct BornSeries {
  std::vector<double> t;
  std::vector<double> n1, n2, n3;  // F_{-sigma} norms of the three terms
  double reconstruction_residual = 0.0;
  DecayFit fit1, fit2, fit3;
};

BornSeries born_decompose(const KgGenerator& gen, const ProjectorSet& proj,
                          const FreePropagator& free_prop, const KgState& psi0,
                          const std::vector<double>& t_samples, double sigma,
                          double dtau, double window_lo, double window_hi);

// Convolution term alone at a single time, for quadrature-refinement checks.
KgState born_second_term(const FreePropagator& free_prop, const VectorXd& v_values,
                         const KgState& psi0, double t, double dtau);

struct DuhamelReport {
  double residual = 0.0;       // F_0 norm of the defect at step dtau
  double residual_half = 0.0;  // same at dtau/2
  double improvement = 0.0;    // residual / residual_half
};

DuhamelReport duhamel_residual(const KgGenerator& gen, const FreePropagator& free_prop,
                               const KgState& psi0, double t, double dtau);

// Operator-norm scan of the sandwiched block V R0^(k) V along omega = x + i,
// in L(F_{-delta}, F_{delta}). Requires beta > 1/2 + k + delta.
DecayFit w_operator_scan(const GridPtr& grid, double m, const PotentialSpec& pot,
                         int k, double delta, const std::vector<double>& sweep,
                         const PowerIterationOptions& opts = {},
                         Samples* samples_out = nullptr);

// Largest magnitude leaking into the structurally zero blocks of the
// sandwich, measured on a deterministic test state. Exactly zero by the
// block assembly.
double w_offblock_leak(const GridPtr& grid, double m, const PotentialSpec& pot, int k,
                       Complex omega);

// Jump N(omega) = M(omega+i0) - M(omega-i0) of M = R0 W R across the bands,
// differentiated k times by the product rule, in L(F_sigma, F_{-sigma}).
// Threshold regime sweeps omega = m + delta and fits against delta;
// high-energy sweeps omega in the band and fits against omega.
DecayFit n_operator_scan(const SchrodingerOp& schrod, double m, int k, double sigma,
                         ScanRegime regime, const std::vector<double>& sweep,
                         const PowerIterationOptions& opts = {},
                         Samples* samples_out = nullptr);

// Scattering data by Cook's method: Phi = Psi(0) - i int_0^{+-T} U0(-tau) V
// Psi(tau) dtau, with the remainder series r(t) = P_c Psi(t) - U0(t) Phi.
struct ScatteringResult {
  KgState phi;
  std::vector<double> t;
  std::vector<double> r_norm;          // F_0 norm of the remainder
  std::vector<double> integrand_norm;  // ||V Psi(tau)||_{F_0} at the nodes
  DecayFit fit;
  double tail_estimate = 0.0;
  double isometry_gap = 0.0;  // | ||Phi||_E - ||P_c Psi_0||_E | / ||P_c Psi_0||_E
  bool monotone_trend = false;
};

ScatteringResult cook_scatter(const KgGenerator& gen, const ProjectorSet& proj,
                              const FreePropagator& free_prop, const KgState& psi0,
                              int direction, double t_max, double dtau,
                              const std::vector<double>& t_samples, double window_lo,
                              double window_hi);

}  // namespace kg

#endif
