#ifndef KG_FREE_KG_HPP
#define KG_FREE_KG_HPP

#include <vector>

#include "kg/grid.hpp"
#include "kg/powerlaw.hpp"
#include "kg/resolvent.hpp"
#include "kg/sine_basis.hpp"
#include "kg/weights.hpp"

namespace kg {

struct ModelParams {
  double m = 1.0;
};

ModelParams make_model(double m);

// Spectral gap (-m, m); the continuous bands are everything beyond.
struct SpectralBands {
  double gap_lo;
  double gap_hi;
};

SpectralBands spectral_bands(const ModelParams& params);

// Dynamical group of the free Klein-Gordon equation, realized exactly in the
// sine eigenbasis of the discrete Dirichlet Laplacian.
class FreePropagator {
 public:
  FreePropagator(GridPtr grid, ModelParams params);

  KgState evolve(const KgState& state, double t) const;

  // Conserved quadratic invariant sum |v_k|^2 + Omega_k^2 |u_k|^2.
  double discrete_energy(const KgState& state) const;

  const VectorXd& frequencies() const { return omega_; }
  const GridPtr& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }

 private:
  GridPtr grid_;
  ModelParams params_;
  const SineBasis* basis_;
  VectorXd omega_;
};

// Convolution with the explicit propagator kernel (sharp spherical front plus
// Bessel tail), reduced to the radial line. Maps the pi-component of the
// Cauchy data to psi at time t; an independent check of the spectral route.
RadialProfile kernel_propagate(const RadialProfile& psi0, double t, double m);

enum class ResolventMode { continuum, discrete };

// Free Schrodinger resolvent (-Delta - zeta)^{-1} on the reduced line, as a
// dense operator. Continuum mode samples the half-line kernel; discrete mode
// inverts the tridiagonal with the outgoing Robin closure.
LinOp resolvent_free_schrodinger(const GridPtr& grid, Complex zeta, ResolventMode mode,
                                 Side side = Side::none);

// Matrix-free block resolvent of the free Klein-Gordon generator,
// (d/d omega)^k for k = 0..2.
Op resolvent_free_kg_op(const GridPtr& grid, double m, Complex omega,
                        Side side = Side::none, int k = 0);

enum class ScanRegime { threshold, high_energy };

// Operator-norm power-law scans of the free resolvent between the energy
// pair spaces. Threshold regime sweeps omega = m - delta inside the gap and
// fits against delta; high-energy sweeps omega = x + i and fits against
// |omega|.
DecayFit scan_free_resolvent_asymptotics(const GridPtr& grid, double m,
                                         ScanRegime regime, int k, double sigma,
                                         const std::vector<double>& sweep,
                                         const PowerIterationOptions& opts = {},
                                         Samples* samples_out = nullptr);

}  // namespace kg

#endif
