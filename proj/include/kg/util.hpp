#ifndef KG_UTIL_HPP
#define KG_UTIL_HPP

#include <cmath>
#include <functional>
#include <vector>

namespace kg {

// Geometric sweep with `points` values from lo to hi inclusive.
inline std::vector<double> geometric_sweep(double lo, double hi, int points) {
  std::vector<double> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i)
    out.push_back(lo * std::pow(hi / lo, points == 1 ? 0.0 : double(i) / (points - 1)));
  return out;
}

// Worker count for sweep loops; 1 disables threading. Results are written to
// preassigned slots, so the output never depends on scheduling.
void set_thread_count(int n);
int thread_count();

void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace kg

#endif
