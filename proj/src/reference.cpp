#include "ks/reference.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ks/error.hpp"

namespace ks {

void validate(const Params& p) {
  if (!(p.chi >= 0.0) || !std::isfinite(p.chi)) throw InvalidArgument("params: chi must be >= 0");
  if (!(p.a >= 0.0) || !std::isfinite(p.a)) throw InvalidArgument("params: a must be >= 0");
  if (!(p.b > 0.0) || !std::isfinite(p.b)) throw InvalidArgument("params: b must be > 0");
  if (p.dim != 1 && p.dim != 2) throw InvalidArgument("params: dim must be 1 or 2");
}

namespace reference {

double logistic_exact(double u0, double a0, double b0, double t) {
  if (u0 == 0.0) return 0.0;
  if (a0 == 0.0) return u0 / (1.0 + b0 * u0 * t);
  if (a0 > 0.0) {
    const double decay = std::exp(-a0 * t);
    return a0 * u0 / (a0 * decay - b0 * u0 * std::expm1(-a0 * t));
  }
  const double grow = std::exp(a0 * t);
  return a0 * u0 * grow / (a0 + b0 * u0 * std::expm1(a0 * t));
}

double upper_envelope(double t, double m0, const Params& p) {
  if (p.chi > p.b) throw InvalidArgument("upper_envelope: requires chi <= b");
  if (p.chi == p.b) return m0 * std::exp(p.a * t);
  return logistic_exact(m0, p.a, p.b - p.chi, t);
}

RegimeReport classify(const Params& p) {
  validate(p);
  constexpr double inf = std::numeric_limits<double>::infinity();
  RegimeReport r;
  const double excess = std::max(p.chi - p.b, 0.0);
  r.max_safe_r = excess > 0.0 ? p.chi / excess : inf;
  r.thresholds.global_chi_max = p.b;
  r.thresholds.half_dim = 0.5 * p.dim;
  r.thresholds.stability_chi_max = 0.5 * p.b;
  r.thresholds.spreading_chi_max = 2.0 * p.b / (3.0 + std::sqrt(p.a * p.dim + 1.0));
  r.global_bounded = p.chi < p.b;
  r.global_exists = p.chi <= p.b;
  r.thm16_applies = r.thresholds.half_dim < r.max_safe_r;
  r.stability = p.b > 2.0 * p.chi;
  r.spreading = p.chi < r.thresholds.spreading_chi_max;
  return r;
}

std::optional<double> cstar_lower_bound_formula(const Params& p) {
  if (!(p.chi < p.b)) return std::nullopt;
  const double v_late = p.a / (p.b - p.chi);
  const double grad_late = std::sqrt(static_cast<double>(p.dim)) * v_late;
  const double reduced_growth = p.a - p.chi * v_late;
  const double positivity = 4.0 * reduced_growth - p.chi * p.chi * grad_late * grad_late;
  if (!(positivity > 0.0)) return std::nullopt;
  return 2.0 * std::sqrt(reduced_growth) - p.chi * grad_late;
}

}  // namespace reference
}  // namespace ks
