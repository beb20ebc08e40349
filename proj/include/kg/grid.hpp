#ifndef KG_GRID_HPP
#define KG_GRID_HPP

#include <Eigen/Core>
#include <complex>
#include <memory>

#include "kg/errors.hpp"

namespace kg {

using Complex = std::complex<double>;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Uniform radial grid on (0, r_max) for reduced functions u(r) = r*psi(r).
// Both endpoints carry a Dirichlet condition and are excluded from storage:
// nodes are r_i = i*h, i = 1..n, with h = r_max/(n+1).
struct RadialGrid {
  double r_max = 0.0;
  int n = 0;
  double h = 0.0;
  VectorXd r;  // the n interior nodes
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(double r_max, int n);

// Sampled reduced radial function. values[i] = u(r_i) = r_i * psi(r_i).
struct RadialProfile {
  GridPtr grid;
  VectorXcd values;
};

// Cauchy datum (psi, psi_dot) in reduced form; u and v share one grid.
struct KgState {
  GridPtr grid;
  VectorXcd u;
  VectorXcd v;
};

RadialProfile make_profile(GridPtr grid, VectorXcd values);
KgState make_state(GridPtr grid, VectorXcd u, VectorXcd v);
KgState make_state(RadialProfile u, RadialProfile v);

// Stack (u, v) into one 2n vector and back; block operators act on the stack.
VectorXcd stack(const KgState& s);
KgState unstack(GridPtr grid, const VectorXcd& w);

// psi(r) = exp(-((r-center)/width)^2) * cos(momentum*r), stored reduced.
RadialProfile gaussian_profile(GridPtr grid, double width, double center = 0.0,
                               double momentum = 0.0);

// Compactly supported bump psi(r) = exp(-1/(1-(r/radius)^2)) for r < radius,
// exactly zero outside. Used where exact support matters.
RadialProfile bump_profile(GridPtr grid, double radius);

// Largest node radius where |u| exceeds tol * max|u|; 0 for the zero profile.
double support_radius(const RadialProfile& p, double tol = 1e-12);

void require_same_grid(const RadialGrid& a, const RadialGrid& b);

inline double bracket_weight(double r) { return std::sqrt(1.0 + r * r); }

}  // namespace kg

#endif
