#pragma once

// Closed-form logistic solutions and the parameter-regime classifier. These
// are the analytic oracles the dynamical checks compare against.

#include <optional>

#include "ks/params.hpp"

namespace ks::reference {

/// Solution of u' = u (a0 - b0 u), u(0) = u0 >= 0. Written in terms of
/// exp(-a0 t) for a0 > 0 so large t does not overflow.
double logistic_exact(double u0, double a0, double b0, double t);

/// Comparison envelope for max_x u: the solution of u' = a u - (b - chi) u^2
/// started at m0. Throws InvalidArgument when chi > b.
double upper_envelope(double t, double m0, const Params& p);

struct RegimeReport {
  bool global_bounded = false;  ///< chi < b
  bool global_exists = false;   ///< chi <= b
  bool thm16_applies = false;   ///< dim/2 < chi / (chi - b)_+
  bool stability = false;       ///< b > 2 chi
  bool spreading = false;       ///< chi < 2b / (3 + sqrt(a dim + 1))
  /// chi / (chi - b)_+, +infinity when chi <= b.
  double max_safe_r = 0.0;

  struct Thresholds {
    double global_chi_max = 0.0;      ///< b
    double half_dim = 0.0;            ///< dim / 2
    double stability_chi_max = 0.0;   ///< b / 2
    double spreading_chi_max = 0.0;   ///< 2b / (3 + sqrt(a dim + 1))
  } thresholds;
};

RegimeReport classify(const Params& p);

/// 2 sqrt(a - chi a/(b-chi)) - chi sqrt(dim) a/(b-chi): the speed functional
/// evaluated at the worst-case late-time values of v and |grad v|. A
/// heuristic floor, not a proven speed. Empty when chi >= b or the matching
/// positivity condition fails.
std::optional<double> cstar_lower_bound_formula(const Params& p);

}  // namespace ks::reference
