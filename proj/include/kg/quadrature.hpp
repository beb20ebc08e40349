#ifndef KG_QUADRATURE_HPP
#define KG_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace kg {

// Gauss-Legendre nodes and weights on [-1, 1], computed once per order by
// Newton iteration on the Legendre polynomial.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(int order);

// Adaptive panel integration of a complex integrand: each panel compares one
// Gauss pass against its two halves and bisects until the local error
// estimate meets the tolerance. Throws NumericalFailureError when the depth
// cap is reached with the estimate still above tolerance.
std::complex<double> integrate_adaptive(
    const std::function<std::complex<double>(double)>& f, double lo, double hi,
    double tol, int max_depth = 36, int order = 15);

}  // namespace kg

#endif
