#include "ks/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "ks/error.hpp"
#include "ks/helmholtz.hpp"
#include "ks/kernels.hpp"

namespace ks::diagnostics {

void TimeSeries::push(double t, double value) {
  if (!times.empty() && !(t > times.back()))
    throw InvalidArgument("time series '" + label + "': times must be strictly increasing");
  times.push_back(t);
  values.push_back(value);
}

double lp_norm(const Field& f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return kernels::active::max_abs(f.span());
  const double vol = f.grid.cell_volume();
  if (p == 1.0) {
    double s = 0.0;
    for (double x : f.values) s += std::abs(x);
    return vol * s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double x : f.values) s += x * x;
    return std::sqrt(vol * s);
  }
  return std::pow(vol * kernels::active::sum_abs_pow(f.span(), p), 1.0 / p);
}

CheckResult check_lr_growth(const TimeSeries& series, double u0_norm, double a, double tol) {
  CheckResult r;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double bound = u0_norm * std::exp(a * series.times[i]) * (1.0 + tol);
    const double excess = series.values[i] - bound;
    r.worst = std::max(r.worst, excess);
    if (excess > 0.0 && r.pass) {
      r.pass = false;
      r.index = static_cast<std::ptrdiff_t>(i);
    }
  }
  return r;
}

CheckResult check_nonincreasing(const TimeSeries& series, double rel_tol) {
  CheckResult r;
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double prev = series.values[i - 1];
    const double excess = series.values[i] - prev * (1.0 + rel_tol);
    r.worst = std::max(r.worst, excess);
    if (excess > 0.0 && r.pass) {
      r.pass = false;
      r.index = static_cast<std::ptrdiff_t>(i);
    }
  }
  return r;
}

double front_radius(const Field& f, double level) {
  const auto radius = f.grid.radius();
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] >= level) best = std::max(best, radius[i]);
  return best;
}

void append_front_sample(FrontTrace& trace, double t, const Field& u, double guard) {
  const double r = front_radius(u, trace.level);
  trace.times.push_back(t);
  trace.radii.push_back(r);
  trace.valid.push_back(r <= (1.0 - guard) * u.grid.half_width());
}

FrontTrace front_trace(std::span<const Snapshot> snapshots, double level, double guard) {
  if (!(level > 0.0)) throw InvalidArgument("front_trace: level must be positive");
  FrontTrace trace;
  trace.level = level;
  for (const auto& s : snapshots) append_front_sample(trace, s.t, s.u, guard);
  return trace;
}

Window default_speed_window(const FrontTrace& trace) {
  double first = kInf;
  double last = -kInf;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    if (!trace.valid[i]) continue;
    first = std::min(first, trace.times[i]);
    last = std::max(last, trace.times[i]);
  }
  if (first > last) return {};
  return {first + 0.5 * (last - first), last};
}

SpeedEstimate estimate_speed(const FrontTrace& trace, Window window) {
  std::vector<double> ts, rs;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (trace.valid[i] && t >= window.begin && t <= window.end) {
      ts.push_back(t);
      rs.push_back(trace.radii[i]);
    }
  }
  if (ts.size() < 8) throw InvalidArgument("estimate_speed: fewer than 8 valid samples in window");
  const double m = static_cast<double>(ts.size());
  double tbar = 0.0, rbar = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tbar += ts[i];
    rbar += rs[i];
  }
  tbar /= m;
  rbar /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxx += (ts[i] - tbar) * (ts[i] - tbar);
    sxy += (ts[i] - tbar) * (rs[i] - rbar);
  }
  SpeedEstimate est;
  est.samples = ts.size();
  est.speed = sxy / sxx;
  const double intercept = rbar - est.speed * tbar;
  double ssr = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double e = rs[i] - (intercept + est.speed * ts[i]);
    ssr += e * e;
  }
  est.std_error = std::sqrt(ssr / (m - 2.0) / sxx);
  return est;
}

CstarResult cstar_functional(const Field& v, std::span<const Field> grad_v, const Params& p, double inner_radius) {
  const auto radius = v.grid.radius();
  CstarResult r;
  std::size_t region = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (radius[i] < inner_radius) continue;
    ++region;
    double g2 = 0.0;
    for (const auto& g : grad_v) g2 += g[i] * g[i];
    const double reduced = p.a - p.chi * v[i];
    r.positivity_min = std::min(r.positivity_min, 4.0 * reduced - p.chi * p.chi * g2);
    if (reduced < 0.0) {
      ++r.undefined;
      continue;
    }
    ++r.defined;
    r.speed_min = std::min(r.speed_min, 2.0 * std::sqrt(reduced) - p.chi * std::sqrt(g2));
  }
  if (region == 0) throw InvalidArgument("cstar_functional: no grid point with |x| >= inner radius");
  return r;
}

CstarResult cstar_functional(const Field& u, const Field& v, const Params& p, double inner_radius) {
  require_same_grid(u.grid, v.grid);
  const VectorField grad_v = helmholtz::grad_potential(u);
  return cstar_functional(v, grad_v, p, inner_radius);
}

EquilibriumDistance equilibrium_distance(const Field& u, const Field& v, const Params& p, double region_radius) {
  require_same_grid(u.grid, v.grid);
  const double target = p.a / p.b;
  const auto radius = u.grid.radius();
  EquilibriumDistance d;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (radius[i] > region_radius) continue;
    d.du = std::max(d.du, std::abs(u[i] - target));
    d.dv = std::max(d.dv, std::abs(v[i] - target));
  }
  return d;
}

double outer_sup(const Field& f, double radius) {
  const auto r = f.grid.radius();
  double best = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (r[i] < radius) continue;
    best = any ? std::max(best, f[i]) : f[i];
    any = true;
  }
  return best;
}

CheckResult sandwich_check(const Field& u, const Field& v) {
  require_same_grid(u.grid, v.grid);
  const double lo = kernels::active::min_value(u.span());
  const double hi = kernels::active::max_value(u.span());
  const double eps = 1e-12 * (1.0 + kernels::active::max_abs(u.span()));
  CheckResult r;
  r.worst = std::max(lo - kernels::active::min_value(v.span()), kernels::active::max_value(v.span()) - hi);
  r.pass = r.worst <= eps;
  if (!r.pass) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] < lo - eps || v[i] > hi + eps) {
        r.index = static_cast<std::ptrdiff_t>(i);
        break;
      }
  }
  return r;
}

CheckResult boundary_guard(const Field& u, double far_value, double guard) {
  if (!(guard > 0.0 && guard < 0.5)) throw InvalidArgument("boundary_guard: guard must lie in (0, 1/2)");
  const auto shell = u.grid.sup_radius();
  const double inner = (1.0 - guard) * u.grid.half_width();
  const double tol = 1e-6 * (1.0 + std::abs(far_value));
  CheckResult r;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (shell[i] < inner) continue;
    const double dev = std::abs(u[i] - far_value);
    r.worst = std::max(r.worst, dev);
    if (dev > tol && r.pass) {
      r.pass = false;
      r.index = static_cast<std::ptrdiff_t>(i);
    }
  }
  return r;
}

}  // namespace ks::diagnostics
