#ifndef KG_ESTIMATES_HPP
#define KG_ESTIMATES_HPP

#include <vector>

#include "kg/free_kg.hpp"
#include "kg/grid.hpp"
#include "kg/powerlaw.hpp"

namespace kg {

// High-energy decay of the free Schrodinger resolvent between H^s_sigma and
// H^{s+l}_{-sigma}: fitted exponent of ||R0^(k)(zeta)|| against |zeta| along
// the sweep zeta = (x + i)^2, which runs at unit distance from the
// continuous spectrum where the rates saturate. Expected slope -(1-l+k)/2.
// Cases: l in {-1,0,1,2} for k = 0, l in {-1,0,1} for k = 1, 2.
DecayFit verify_a1(const GridPtr& grid, int k, int l, int s, double sigma,
                   const std::vector<double>& sweep,
                   const PowerIterationOptions& opts = {},
                   Samples* samples_out = nullptr);

struct RatioSample {
  int profile = 0;
  Complex zeta;
  double ratio = 0.0;
};

struct RatioReport {
  double sup = 0.0;
  Complex argmax_zeta;
  int argmax_profile = -1;
  int n_samples = 0;
  std::vector<RatioSample> samples;
};

// Empirical constant of ||grad psi||_{H^0_{-sigma}} <= C ||(Delta+zeta)
// psi||_{H^0_sigma} over a profile family and a zeta sweep.
RatioReport verify_a2(const std::vector<RadialProfile>& profiles, double sigma,
                      const std::vector<Complex>& zetas);

// Empirical constant of ||psi||_{H^l_delta} <= C |zeta|^{-(1-l)/2}
// (||(Delta+zeta) psi||_{H^0_delta} + ||grad psi||_{H^0_delta}), |zeta| >= 1.
RatioReport verify_a3(const std::vector<RadialProfile>& profiles, int l, double delta,
                      const std::vector<Complex>& zetas);

// Pointwise scan of (1+|xi|^l)^2 |zeta|^{1-l} / (||xi|^2-zeta|^2 + |xi|^2)
// over the fixed grid xi in [0, 100] step 0.01, |zeta| in {1, 10, 1e2, 1e3,
// 1e4}, 8 rays. The proof chain gives sup <= 8 for l = 0.
double a4_pointwise_sup(int l);

// Relative defect of zeta R0'(zeta) = -R0 + (1/2)[r d/dr, R0] on one profile,
// measured in H^0_{-1}; the generator r d/dr acts on reduced functions as
// r u' - u with centered differences.
double lavine_residual(const GridPtr& grid, const RadialProfile& profile, Complex zeta);

// Oscillatory-integral benchmark: F(w) = sqrt(w - a) e^{-(w - a)} on
// (a, inf), I(t) = int F e^{-itw} dw with |I(t)| = Gamma(3/2) (1+t^2)^{-3/4}.
struct JensenKatoResult {
  std::vector<double> t;
  std::vector<double> direct_abs;   // quadrature of I(t), w = a + y^2
  std::vector<double> closed_abs;   // closed form
  std::vector<double> zygmund_abs;  // int F' e^{-itw} via the half-period trick
  double max_rel_err = 0.0;         // direct vs closed form
  double zygmund_consistency = 0.0; // max rel gap between zygmund route and t|I|
  DecayFit fit_direct;              // expected slope -3/2
  DecayFit fit_zygmund;             // expected slope -1/2
};

JensenKatoResult jensen_kato_demo(double a, const std::vector<double>& t_samples,
                                  double window_lo, double window_hi,
                                  double panel_tol = 1e-8, int max_depth = 36);

}  // namespace kg

#endif
