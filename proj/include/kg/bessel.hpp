#ifndef KG_BESSEL_HPP
#define KG_BESSEL_HPP

namespace kg {

// Bessel functions of the first kind, orders 0 and 1, for x >= 0.
// Absolute accuracy better than 1e-10 over the whole range. A power series
// (long double accumulation) covers x <= 9; a Hankel-form asymptotic branch
// with minimax-fitted modulus/phase polynomials covers x > 9. The two
// branches overlap on [8, 12], where the build tests require agreement to
// 1e-10.
double bessel_j0(double x);
double bessel_j1(double x);

namespace bessel_detail {
// Individual branches, exposed for the overlap cross-check.
double j0_series(double x);
double j1_series(double x);
double j0_asymptotic(double x);
double j1_asymptotic(double x);
}  // namespace bessel_detail

}  // namespace kg

#endif
