#include "kg/powerlaw.hpp"

#include <algorithm>
#include <cmath>

#include "kg/errors.hpp"

namespace kg {

DecayFit fit_power_law(const Samples& samples, double window_lo, double window_hi) {
  if (!(window_lo < window_hi))
    throw InvalidConfigError("fit_power_law: empty window");
  std::vector<double> lx, ly;
  for (const auto& [x, y] : samples) {
    if (x < window_lo || x > window_hi) continue;
    if (!(x > 0.0)) throw DomainError("fit_power_law: non-positive x in window");
    if (!(y > 0.0)) throw DomainError("fit_power_law: non-positive y in window");
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  const int m = static_cast<int>(lx.size());
  if (m < 4) throw InsufficientDataError("fit_power_law: fewer than 4 points in window");

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw InsufficientDataError("fit_power_law: degenerate abscissae");

  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  fit.n_points = m;
  double ss_res = 0.0;
  for (int i = 0; i < m; ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += e * e;
  }
  if (syy <= 1e-300)
    fit.r_squared = ss_res <= 1e-300 ? 1.0 : 0.0;  // constant data
  else
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

}  // namespace kg
