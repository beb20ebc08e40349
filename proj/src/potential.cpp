#include "kg/potential.hpp"

#include <cmath>
#include <limits>

namespace kg {

PotentialKind potential_kind_from_string(const std::string& s) {
  if (s == "square_well") return PotentialKind::square_well;
  if (s == "gaussian_well") return PotentialKind::gaussian_well;
  if (s == "algebraic") return PotentialKind::algebraic;
  throw InvalidConfigError("unknown potential kind: " + s);
}

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::square_well: return "square_well";
    case PotentialKind::gaussian_well: return "gaussian_well";
    case PotentialKind::algebraic: return "algebraic";
  }
  return "?";
}

ConditionVReport check_condition_v(const PotentialSpec& pot, const RadialGrid& grid) {
  if (!(pot.a > 0.0)) throw InvalidConfigError("potential range a must be positive");
  if (pot.sign != 1 && pot.sign != -1)
    throw InvalidConfigError("potential sign flag must be +1 or -1");
  if (pot.kind == PotentialKind::algebraic && !(pot.beta > 3.0))
    throw InvalidConfigError("algebraic potential requires tail exponent beta > 3");
  ConditionVReport rep;
  rep.beta = effective_beta(pot) == std::numeric_limits<double>::infinity()
                 ? 4.0  // reporting exponent for superpolynomial kinds
                 : pot.beta;
  const VectorXd v = potential_values(pot, grid);
  double c = 0.0;
  for (int i = 0; i < grid.n; ++i)
    c = std::max(c, std::abs(v[i]) * std::pow(1.0 + grid.r[i] * grid.r[i], 0.5 * rep.beta));
  rep.constant = c;
  return rep;
}

double effective_beta(const PotentialSpec& pot) {
  return pot.kind == PotentialKind::algebraic
             ? pot.beta
             : std::numeric_limits<double>::infinity();
}

VectorXd potential_values(const PotentialSpec& pot, const RadialGrid& grid) {
  VectorXd v(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double r = grid.r[i];
    double val = 0.0;
    switch (pot.kind) {
      case PotentialKind::square_well: {
        // cell average over [r - h/2, r + h/2]; a sharp sample would shift
        // the effective well edge by O(h) and drag every eigenvalue with it
        const double lo = r - 0.5 * grid.h, hi = r + 0.5 * grid.h;
        const double overlap = std::max(0.0, std::min(hi, pot.a) - std::max(lo, 0.0));
        val = pot.v0 * overlap / grid.h;
        break;
      }
      case PotentialKind::gaussian_well:
        val = pot.v0 * std::exp(-(r / pot.a) * (r / pot.a));
        break;
      case PotentialKind::algebraic:
        val = pot.v0 * std::pow(1.0 + (r / pot.a) * (r / pot.a), -0.5 * pot.beta);
        break;
    }
    v[i] = pot.sign * val;
  }
  return v;
}

}  // namespace kg
