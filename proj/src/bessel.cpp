#include "kg/bessel.hpp"

#include <cmath>

#include "kg/errors.hpp"

// The asymptotic branches use the classic Hart minimax fits of the Hankel
// modulus/phase functions on (8, inf), the same tables used by the Boost and
// Cephes implementations.

namespace kg {
namespace bessel_detail {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Horner evaluation of P(y)/Q(y) with coefficients in ascending order.
template <int N>
double rational(const double (&p)[N], const double (&q)[N], double y) {
  double np = p[N - 1], nq = q[N - 1];
  for (int i = N - 2; i >= 0; --i) {
    np = np * y + p[i];
    nq = nq * y + q[i];
  }
  return np / nq;
}

}  // namespace

double j0_series(double x) {
  // J0(x) = sum_k (-1)^k (x/2)^{2k} / (k!)^2, accumulated in long double;
  // cancellation at x = 12 costs ~4 digits, still well under 1e-12.
  const long double q = (long double)(x) * x / 4.0L;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 64; ++k) {
    term *= -q / ((long double)k * k);
    sum += term;
    if (std::abs((double)term) < 1e-24) break;
  }
  return (double)sum;
}

double j1_series(double x) {
  // J1(x) = (x/2) sum_k (-1)^k (x/2)^{2k} / (k! (k+1)!)
  const long double half = 0.5L * x;
  const long double q = half * half;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 64; ++k) {
    term *= -q / ((long double)k * (k + 1));
    sum += term;
    if (std::abs((double)term) < 1e-24) break;
  }
  return (double)(half * sum);
}

double j0_asymptotic(double x) {
  static const double PC[] = {2.2779090197304684302e+04, 4.1345386639580765797e+04,
                              2.1170523380864944322e+04, 3.4806486443249270347e+03,
                              1.5376201909008354296e+02, 8.8961548424210455236e-01};
  static const double QC[] = {2.2779090197304684318e+04, 4.1370412495510416640e+04,
                              2.1215350561880115730e+04, 3.5028735138235608207e+03,
                              1.5711159858080893649e+02, 1.0};
  static const double PS[] = {-8.9226600200800094098e+01, -1.8591953644342993800e+02,
                              -1.1183429920482737611e+02, -2.2300261666214198472e+01,
                              -1.2441026745835638459e+00, -8.8033303048680751817e-03};
  static const double QS[] = {5.7105024128512061905e+03, 1.1951131543434613647e+04,
                              7.2642780169211018836e+03, 1.4887231232283756582e+03,
                              9.0593769594993125859e+01, 1.0};
  const double y = 8.0 / x, y2 = y * y;
  const double z = x - 0.25 * kPi;
  const double rc = rational(PC, QC, y2);
  const double rs = rational(PS, QS, y2);
  return std::sqrt(2.0 / (kPi * x)) * (rc * std::cos(z) - y * rs * std::sin(z));
}

double j1_asymptotic(double x) {
  static const double PC[] = {-4.4357578167941278571e+06, -9.9422465050776411957e+06,
                              -6.6033732483649391093e+06, -1.5235293511811373833e+06,
                              -1.0982405543459346727e+05, -1.6116166443246101165e+03,
                              0.0};
  static const double QC[] = {-4.4357578167941278568e+06, -9.9341243899345856590e+06,
                              -6.5853394797230870728e+06, -1.5118095066341608816e+06,
                              -1.0726385991103820119e+05, -1.4550094401904961825e+03,
                              1.0};
  static const double PS[] = {3.3220913409857223519e+04, 8.5145160675335701966e+04,
                              6.6178836581270835179e+04, 1.8494262873223866797e+04,
                              1.7063754290207680021e+03, 3.5265133846636032186e+01,
                              0.0};
  static const double QS[] = {7.0871281941028743574e+05, 1.8194580422439972989e+06,
                              1.4194606696037208929e+06, 4.0029443582266975117e+05,
                              3.7890229745772202641e+04, 8.6383677696049909675e+02,
                              1.0};
  const double y = 8.0 / x, y2 = y * y;
  const double z = x - 0.75 * kPi;
  const double rc = rational(PC, QC, y2);
  const double rs = rational(PS, QS, y2);
  return std::sqrt(2.0 / (kPi * x)) * (rc * std::cos(z) - y * rs * std::sin(z));
}

}  // namespace bessel_detail

double bessel_j0(double x) {
  if (x < 0.0) throw DomainError("bessel_j0: negative argument");
  return x <= 9.0 ? bessel_detail::j0_series(x) : bessel_detail::j0_asymptotic(x);
}

double bessel_j1(double x) {
  if (x < 0.0) throw DomainError("bessel_j1: negative argument");
  return x <= 9.0 ? bessel_detail::j1_series(x) : bessel_detail::j1_asymptotic(x);
}

}  // namespace kg
