#pragma once

// Norms, theorem-inequality monitors, front tracking and guards. Everything
// here is a pure function of snapshots.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ks/grid.hpp"
#include "ks/params.hpp"

namespace ks::diagnostics {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct TimeSeries {
  std::string label;
  std::vector<double> times;
  std::vector<double> values;

  /// Throws InvalidArgument unless t is strictly after the last sample.
  void push(double t, double value);
  std::size_t size() const noexcept { return times.size(); }
};

/// Verdict of a monitor. `worst` is the largest signed excess over the
/// allowed bound (<= 0 on pass); `index` is the first failing sample or -1.
struct CheckResult {
  bool pass = true;
  double worst = -kInf;
  std::ptrdiff_t index = -1;
};

/// (h^dim sum |f|^p)^{1/p}, or max |f| for p = infinity. Throws for p < 1.
double lp_norm(const Field& f, double p);

/// values[i] <= u0_norm * exp(a times[i]) * (1 + tol) for every i.
CheckResult check_lr_growth(const TimeSeries& series, double u0_norm, double a, double tol);

/// values[i+1] <= values[i] * (1 + rel_tol) for every i.
CheckResult check_nonincreasing(const TimeSeries& series, double rel_tol);

struct FrontTrace {
  double level = 0.0;
  std::vector<double> times;
  std::vector<double> radii;
  std::vector<bool> valid;
};

struct Snapshot {
  double t = 0.0;
  Field u;
};

/// max |x| over points with f >= level, 0 when there are none.
double front_radius(const Field& f, double level);

/// Appends one sample; it is valid when the radius stays inside (1-guard) L.
void append_front_sample(FrontTrace& trace, double t, const Field& u, double guard);

FrontTrace front_trace(std::span<const Snapshot> snapshots, double level, double guard);

struct SpeedEstimate {
  double speed = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

struct Window {
  double begin = -kInf;
  double end = kInf;
};

/// Last half (in time) of the valid part of the trace.
Window default_speed_window(const FrontTrace& trace);

/// Least-squares slope of radius against time over the valid samples inside
/// `window`. Throws InvalidArgument with fewer than 8 such samples.
SpeedEstimate estimate_speed(const FrontTrace& trace, Window window);

struct CstarResult {
  double speed_min = kInf;       ///< min of 2 sqrt(a - chi v) - chi |grad v|
  double positivity_min = kInf;  ///< min of 4 (a - chi v) - chi^2 |grad v|^2
  std::size_t defined = 0;
  std::size_t undefined = 0;     ///< points where a - chi v < 0
};

/// Minimum of the speed and positivity functionals over |x| >= inner_radius.
/// grad v is recomputed from u. Throws InvalidArgument when the region is empty.
CstarResult cstar_functional(const Field& u, const Field& v, const Params& p, double inner_radius);

/// Same functionals with grad v supplied by the caller.
CstarResult cstar_functional(const Field& v, std::span<const Field> grad_v, const Params& p, double inner_radius);

struct EquilibriumDistance {
  double du = 0.0;
  double dv = 0.0;
};

/// sup over |x| <= region_radius of |u - a/b| and |v - a/b|.
EquilibriumDistance equilibrium_distance(const Field& u, const Field& v, const Params& p, double region_radius);

/// sup over |x| >= radius of f, or 0 when no point qualifies.
double outer_sup(const Field& f, double radius);

/// min u - eps <= v <= max u + eps pointwise, eps = 1e-12 (1 + |u|_inf).
CheckResult sandwich_check(const Field& u, const Field& v);

/// |u - far_value| <= 1e-6 (1 + |far_value|) on the shell max_i |x_i| >= (1-guard) L.
/// Throws InvalidArgument unless 0 < guard < 1/2.
CheckResult boundary_guard(const Field& u, double far_value, double guard);

}  // namespace ks::diagnostics
