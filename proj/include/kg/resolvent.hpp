#ifndef KG_RESOLVENT_HPP
#define KG_RESOLVENT_HPP

#include <Eigen/Core>
#include <Eigen/SparseLU>
#include <memory>

#include "kg/grid.hpp"
#include "kg/weights.hpp"

namespace kg {

// Limiting-absorption side tag for spectral parameters on the continuous
// spectrum. Never inferred from floating-point signs.
enum class Side { none, plus, minus };

// sqrt(zeta) on the branch Im >= 0 (cut along [0, inf)); for real positive
// zeta the side tag selects the boundary value +sqrt (plus) or -sqrt (minus).
// Real positive zeta without a tag is a branch ambiguity.
Complex sqrt_branch(Complex zeta, Side side);

enum class BoundaryClosure {
  dirichlet,        // u(r_max) = 0
  robin_outgoing,   // u'(r_max) = i sqrt(zeta) u(r_max), branch per side tag
};

// Factorized (-D2 + diag(q) - zeta) on the reduced line with Dirichlet at the
// origin and the chosen closure at r_max. The matrix is complex symmetric, so
// the adjoint solve is conj o solve o conj.
class TridiagResolvent {
 public:
  TridiagResolvent(GridPtr grid, const VectorXd& q, Complex zeta,
                   Side side = Side::none,
                   BoundaryClosure closure = BoundaryClosure::robin_outgoing);

  VectorXcd solve(const VectorXcd& f) const;
  VectorXcd solve_adjoint(const VectorXcd& f) const;
  Op as_op() const;

  Complex zeta() const { return zeta_; }
  const GridPtr& grid() const { return grid_; }

 private:
  GridPtr grid_;
  Complex zeta_;
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<Complex>>> lu_;
};

// Blocks of the Klein-Gordon resolvent and its first two omega-derivatives,
// assembled from applications of a scalar resolvent R(zeta), zeta = w^2 - m^2:
//
//   k=0:  [ w R        i R   ]      and the exact derivative formulas in w
//         [ -i(1+w^2R) w R   ]      obtained from dR/dw = 2w R^2.
//
// The same assembly serves the free and the perturbed operator; only the
// scalar resolvent differs.
Op kg_block_resolvent_op(Op r, Complex omega, int k);

// Dense Nystrom matrix of the half-line kernel sin(k r_<) e^{i k r_>}/k with
// k = sqrt_branch(zeta, side); entries G(r_i, s_j) h.
Eigen::MatrixXcd free_resolvent_kernel_matrix(const RadialGrid& grid, Complex zeta,
                                              Side side = Side::none);

}  // namespace kg

#endif
