#ifndef KG_SCHRODINGER_HPP
#define KG_SCHRODINGER_HPP

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "kg/free_kg.hpp"
#include "kg/grid.hpp"
#include "kg/potential.hpp"
#include "kg/powerlaw.hpp"
#include "kg/resolvent.hpp"

namespace kg {

// Perturbed Schrodinger operator H = -D2 + Q on the reduced line, Q = -V,
// Dirichlet at both ends. Carries its potential and a lazily built full
// eigen-decomposition (tridiagonal QL, orthonormal eigenvectors).
class SchrodingerOp {
 public:
  SchrodingerOp(GridPtr grid, PotentialSpec pot);

  const GridPtr& grid() const { return grid_; }
  const PotentialSpec& potential() const { return pot_; }
  const VectorXd& v() const { return v_; }  // the potential of the wave equation
  const VectorXd& q() const { return q_; }  // effective reduced-line potential

  VectorXcd apply(const VectorXcd& u) const;  // H u
  Op as_op() const;

  const VectorXd& eigenvalues() const;
  const Eigen::MatrixXd& eigenvectors() const;  // orthonormal columns

  TridiagResolvent resolvent(Complex zeta, Side side = Side::none,
                             BoundaryClosure closure = BoundaryClosure::robin_outgoing) const;

 private:
  void ensure_spectrum() const;

  GridPtr grid_;
  PotentialSpec pot_;
  VectorXd v_, q_;
  struct SpectrumCache;
  mutable std::shared_ptr<SpectrumCache> cache_;
};

struct BoundState {
  double zeta;        // eigenvalue, < 0
  VectorXd profile;   // eigenprofile, normalized in the 4 pi h inner product
  double residual;    // ||(H - zeta) psi||
};

struct SpectrumResult {
  std::vector<BoundState> bound_states;  // zeta increasing
  bool threshold_flag = false;           // some zeta_j <= -m^2
};

SpectrumResult negative_spectrum(const SchrodingerOp& op, double m);

// Zero-energy diagnostics. Detector A shoots -u'' + Q u = 0 from the origin
// and fits u ~ alpha + b r on the tail window; detector B takes the smallest
// singular value of 1 + A0 Q with the half-line kernel min(r, s).
struct RegularCaseReport {
  double shooting_b = 0.0;
  double shooting_alpha = 0.0;
  double smin = 0.0;
  bool is_regular = false;
  bool detectors_agree = true;
  double margin = 0.0;      // distance of smin from its tolerance
  int node_count = 0;       // sign changes of the zero-energy solution
};

struct RegularCaseTolerances {
  double tol_b = 1e-3;
  double tol_s = 1e-3;
  double tail_fraction = 0.8;  // tail window [fraction * r_max, r_max]
};

RegularCaseReport regular_case_test(const PotentialSpec& pot, const GridPtr& grid,
                                    const RegularCaseTolerances& tol = {});

// Zero-energy shooting solution itself (Numerov), u(0) = 0, u'(0) = 1.
VectorXd shooting_solution(const VectorXd& q, const RadialGrid& grid);

// Perturbed resolvent as a dense operator; refuses zeta within tol of a
// computed eigenvalue.
LinOp resolvent_perturbed(const SchrodingerOp& op, Complex zeta, Side side = Side::none,
                          double eigen_tol = 1e-9);

// Threshold regime sweeps zeta = -delta and fits between H^{-1}_sigma and
// H^1_{-sigma} (s and l are ignored there); high-energy sweeps zeta =
// (x + i)^2 and fits between H^s_sigma and H^{s+l}_{-sigma}.
DecayFit scan_perturbed_resolvent_asymptotics(const SchrodingerOp& op, ScanRegime regime,
                                              int k, int s, int l, double sigma,
                                              const std::vector<double>& sweep,
                                              const PowerIterationOptions& opts = {},
                                              Samples* samples_out = nullptr);

// Square-well coupling scan: locates the zero-energy resonance coupling by a
// bisection on the shooting slope and records both detectors along the scan.
struct CouplingScanPoint {
  double v0;
  double b;
  double smin;
  bool regular_shooting;
  bool regular_operator;
};

struct CouplingScanResult {
  std::vector<CouplingScanPoint> points;
  double resonance_v0 = 0.0;
  int disagreements = 0;           // points where the detectors differ
  int disagreements_off_resonance = 0;  // excluding +-1 scan step around it
  double smin_dip_factor = 0.0;    // min smin off resonance / smin at resonance
};

CouplingScanResult scan_square_well_coupling(const GridPtr& grid, double a, double v0_lo,
                                             double v0_hi, int steps,
                                             const RegularCaseTolerances& tol = {});

}  // namespace kg

#endif
