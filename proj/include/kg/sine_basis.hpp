#ifndef KG_SINE_BASIS_HPP
#define KG_SINE_BASIS_HPP

#include <Eigen/Core>

#include "kg/grid.hpp"

namespace kg {

// Exact eigen-calculus of the discrete Dirichlet Laplacian L = -D2 on a
// uniform grid. The eigenvectors are the orthonormal sine modes
//   e_k(i) = sqrt(2/(n+1)) sin(i k pi/(n+1)),  k = 1..n,
// with eigenvalues lambda_k = (4/h^2) sin^2(k pi / (2(n+1))). The transform
// matrix is symmetric and involutive, so one routine serves both directions.
// Applied through an FFT of length 2(n+1).
class SineBasis {
 public:
  explicit SineBasis(GridPtr grid);

  const RadialGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }

  // Eigenvalues of -D2, increasing in k.
  const VectorXd& laplacian_eigenvalues() const { return lambda_; }

  // Orthonormal sine transform (self-inverse).
  VectorXcd transform(const VectorXcd& x) const;

  // S * diag(f(lambda)) * S applied to x.
  VectorXcd apply_spectral_multiplier(const VectorXcd& multiplier,
                                      const VectorXcd& x) const;

 private:
  GridPtr grid_;
  VectorXd lambda_;
};

// One lazily built SineBasis per grid object, shared by all consumers.
const SineBasis& sine_basis(const GridPtr& grid);

}  // namespace kg

#endif
