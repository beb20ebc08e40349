#include "kg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "kg/errors.hpp"

namespace kg {

namespace {

GaussRule build_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    // Chebyshev-like initial guess, Newton on P_n
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

std::complex<double> panel(const std::function<std::complex<double>(double)>& f,
                           double lo, double hi, const GaussRule& rule) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  std::complex<double> acc(0.0, 0.0);
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

std::complex<double> adaptive(const std::function<std::complex<double>(double)>& f,
                              double lo, double hi, double tol, int depth,
                              const GaussRule& rule) {
  const std::complex<double> whole = panel(f, lo, hi, rule);
  const double mid = 0.5 * (lo + hi);
  const std::complex<double> left = panel(f, lo, mid, rule);
  const std::complex<double> right = panel(f, mid, hi, rule);
  const double err = std::abs(whole - (left + right));
  if (err <= tol) return left + right;
  if (depth <= 0)
    throw NumericalFailureError("adaptive quadrature: refinement failure", err);
  return adaptive(f, lo, mid, 0.5 * tol, depth - 1, rule) +
         adaptive(f, mid, hi, 0.5 * tol, depth - 1, rule);
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

std::complex<double> integrate_adaptive(
    const std::function<std::complex<double>(double)>& f, double lo, double hi,
    double tol, int max_depth, int order) {
  const GaussRule rule = gauss_legendre(order);  // copy: reentrancy under the lock
  return adaptive(f, lo, hi, tol, max_depth, rule);
}

}  // namespace kg
