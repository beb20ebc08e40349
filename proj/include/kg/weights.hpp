#ifndef KG_WEIGHTS_HPP
#define KG_WEIGHTS_HPP

#include <Eigen/Core>
#include <functional>
#include <optional>

#include "kg/grid.hpp"
#include "kg/sine_basis.hpp"

namespace kg {

// Selects the weighted Sobolev norm ||<r>^sigma <grad>^s psi||_{L2}. The
// smoothing order s is an integer in {-1, 0, 1}; s = 2 is additionally
// admitted for the high-order appendix estimates.
struct WeightSpec {
  int s = 0;
  double sigma = 0.0;
};

WeightSpec make_weight(int s, double sigma);

// The invertible norm map W = diag(<r>^sigma) S (1+lambda)^{s/2} S realizing
// the weighted norm on reduced profiles: ||u||_{s,sigma} = sqrt(4 pi h) |W u|.
// Weight outside smoothing, matching the norm definition. The factors are
// individually self-adjoint but do not commute, so the adjoint variants apply
// them in reversed order.
VectorXcd apply_weight_map(const SineBasis& basis, WeightSpec w, const VectorXcd& x);
VectorXcd apply_weight_map_adjoint(const SineBasis& basis, WeightSpec w,
                                   const VectorXcd& x);
VectorXcd apply_weight_map_inverse(const SineBasis& basis, WeightSpec w,
                                   const VectorXcd& x);
VectorXcd apply_weight_map_inverse_adjoint(const SineBasis& basis, WeightSpec w,
                                           const VectorXcd& x);

double weighted_norm(const RadialProfile& p, WeightSpec w);

// Energy norm of Cauchy data: ||u||_{H^1_sigma} + ||v||_{H^0_sigma}.
double energy_norm(const KgState& s, double sigma);

// Conserved quadratic energy seminorm sqrt(sum |v_hat|^2 + Omega^2 |u_hat|^2)
// of the generator with frequencies Omega^2 = op_eigenvalues + m^2, evaluated
// through the supplied diagonalizing transform.
double quadratic_energy_norm(const VectorXcd& u_hat, const VectorXcd& v_hat,
                             const VectorXd& omega, double measure);

// ---------------------------------------------------------------------------
// Linear operators.

// Dense operator on profile values with optional weight annotations.
struct LinOp {
  Eigen::MatrixXcd matrix;
  std::optional<WeightSpec> domain_weight;
  std::optional<WeightSpec> codomain_weight;
};

// Matrix-free operator: forward and Hermitian-adjoint applications.
struct Op {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::function<VectorXcd(const VectorXcd&)> apply;
  std::function<VectorXcd(const VectorXcd&)> apply_h;
};

Op op_identity(Eigen::Index n);
Op op_zero(Eigen::Index rows, Eigen::Index cols);
Op op_from_matrix(const Eigen::MatrixXcd& m);
Op op_diagonal(const VectorXcd& d);
Op op_scale(Complex c, Op a);
Op op_add(Op a, Op b);
Op op_sub(Op a, Op b);
Op op_compose(Op a, Op b);             // x -> a(b(x))
Op op_power(Op a, int p);              // p >= 1 repeated application
Op op_block2(Op a11, Op a12, Op a21, Op a22);  // on stacked (u, v)

// Weight sandwiches for operator norms. Scalar version: one profile space on
// each side. Block version: the energy pair H^1_sigma (+) H^0_sigma on both
// components, realized in its quadratic-mean form.
Op op_weight_sandwich(const SineBasis& basis, WeightSpec from, WeightSpec to, Op a);
Op op_energy_weight_sandwich(const SineBasis& basis, double sigma_from,
                             double sigma_to, Op a);

struct PowerIterationOptions {
  double tol = 1e-8;     // relative stabilization of the singular value
  int max_iter = 2000;
  double abs_tol = 0.0;  // absolute slack, for norms at the roundoff floor
  int block = 1;         // simultaneous-iteration width for clustered spectra
};

// Largest singular value by (block) power iteration on A^H A with a
// deterministic start. Throws NumericalFailureError (carrying the last
// iterate gap) if the estimate has not stabilized within the cap.
double operator_norm(const Op& a, const PowerIterationOptions& opts = {});

// ||W_to A W_from^{-1}|| for a dense operator between weighted profile spaces.
double operator_norm_weighted(const LinOp& a, WeightSpec from, WeightSpec to,
                              const GridPtr& grid,
                              const PowerIterationOptions& opts = {});

}  // namespace kg

#endif
