#ifndef KG_POTENTIAL_HPP
#define KG_POTENTIAL_HPP

#include <string>

#include "kg/grid.hpp"

namespace kg {

enum class PotentialKind { square_well, gaussian_well, algebraic };

// Radial potential V(r) entering the wave equation as +V(r) psi. With the
// default sign (+1) the well is attractive for the associated Schrodinger
// operator, whose effective potential on the reduced line is Q = -V.
//
//   square_well:   V = v0 on r < a, 0 beyond
//   gaussian_well: V = v0 exp(-(r/a)^2)
//   algebraic:     V = v0 (1 + (r/a)^2)^(-beta/2), beta > 3 required
struct PotentialSpec {
  PotentialKind kind = PotentialKind::square_well;
  double v0 = 4.0;
  double a = 1.0;
  double beta = 4.0;  // tail exponent, algebraic kind only
  int sign = +1;
};

PotentialKind potential_kind_from_string(const std::string& s);
std::string to_string(PotentialKind k);

// Decay constant C and exponent of the bound |V(r_i)| <= C <r_i>^(-beta)
// actually achieved on a grid.
struct ConditionVReport {
  double beta = 0.0;
  double constant = 0.0;
};

// Validates the spec (positive range, beta > 3 for the algebraic kind) and
// reports the decay constant on the given grid.
ConditionVReport check_condition_v(const PotentialSpec& pot, const RadialGrid& grid);

// Effective beta for hypothesis checks: the declared beta for the algebraic
// kind, +infinity-like for the superpolynomially decaying kinds.
double effective_beta(const PotentialSpec& pot);

VectorXd potential_values(const PotentialSpec& pot, const RadialGrid& grid);

}  // namespace kg

#endif
