#include "kg/grid.hpp"

#include <cmath>

namespace kg {

GridPtr make_grid(double r_max, int n) {
  if (!(r_max > 0.0)) throw InvalidConfigError("make_grid: r_max must be positive");
  if (n < 8) throw InvalidConfigError("make_grid: too few interior nodes");
  auto g = std::make_shared<RadialGrid>();
  g->r_max = r_max;
  g->n = n;
  g->h = r_max / (n + 1);
  g->r = VectorXd::LinSpaced(n, g->h, n * g->h);
  return g;
}

RadialProfile make_profile(GridPtr grid, VectorXcd values) {
  if (!grid) throw InvalidConfigError("profile without grid");
  if (values.size() != grid->n)
    throw InvalidConfigError("profile length does not match grid");
  if (!values.allFinite()) throw InvalidConfigError("profile has non-finite values");
  return RadialProfile{std::move(grid), std::move(values)};
}

KgState make_state(GridPtr grid, VectorXcd u, VectorXcd v) {
  if (!grid) throw InvalidConfigError("state without grid");
  if (u.size() != grid->n || v.size() != grid->n)
    throw InvalidConfigError("state components do not match grid");
  return KgState{std::move(grid), std::move(u), std::move(v)};
}

KgState make_state(RadialProfile u, RadialProfile v) {
  require_same_grid(*u.grid, *v.grid);
  return KgState{u.grid, std::move(u.values), std::move(v.values)};
}

VectorXcd stack(const KgState& s) {
  VectorXcd w(2 * s.grid->n);
  w.head(s.grid->n) = s.u;
  w.tail(s.grid->n) = s.v;
  return w;
}

KgState unstack(GridPtr grid, const VectorXcd& w) {
  const int n = grid->n;
  if (w.size() != 2 * n) throw InvalidConfigError("unstack: wrong length");
  return KgState{std::move(grid), w.head(n), w.tail(n)};
}

RadialProfile gaussian_profile(GridPtr grid, double width, double center,
                               double momentum) {
  VectorXcd u(grid->n);
  for (int i = 0; i < grid->n; ++i) {
    const double r = grid->r[i];
    const double z = (r - center) / width;
    u[i] = Complex(r * std::exp(-z * z) * std::cos(momentum * r), 0.0);
  }
  return make_profile(std::move(grid), std::move(u));
}

RadialProfile bump_profile(GridPtr grid, double radius) {
  VectorXcd u = VectorXcd::Zero(grid->n);
  for (int i = 0; i < grid->n; ++i) {
    const double r = grid->r[i];
    const double z = r / radius;
    if (z < 1.0) u[i] = Complex(r * std::exp(-1.0 / (1.0 - z * z)), 0.0);
  }
  return make_profile(std::move(grid), std::move(u));
}

double support_radius(const RadialProfile& p, double tol) {
  const double peak = p.values.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0.0;
  for (int i = p.grid->n - 1; i >= 0; --i)
    if (std::abs(p.values[i]) > tol * peak) return p.grid->r[i];
  return 0.0;
}

void require_same_grid(const RadialGrid& a, const RadialGrid& b) {
  if (&a == &b) return;
  if (a.n != b.n || a.r_max != b.r_max)
    throw InvalidConfigError("grids do not match");
}

}  // namespace kg
