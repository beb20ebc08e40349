#ifndef KG_POWERLAW_HPP
#define KG_POWERLAW_HPP

#include <utility>
#include <vector>

namespace kg {

// Result of a log-log least-squares line: y ~ exp(intercept) * x^slope.
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
};

using Samples = std::vector<std::pair<double, double>>;

// Least-squares line through (log x, log y) restricted to x in
// [window_lo, window_hi]. Requires at least 4 usable points and positive y
// inside the window.
DecayFit fit_power_law(const Samples& samples, double window_lo, double window_hi);

}  // namespace kg

#endif
