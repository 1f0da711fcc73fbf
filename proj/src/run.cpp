#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "ks/error.hpp"
#include "ks/helmholtz.hpp"
#include "ks/kernels.hpp"
#include "ks/reference.hpp"
#include "ks/report.hpp"
#include "ks/stepper.hpp"

namespace ks {

namespace dg = diagnostics;

namespace {

std::string norm_label(double p) {
  if (std::isinf(p)) return "linf";
  std::ostringstream s;
  s << "l" << p;
  return s.str();
}

class Recorder {
 public:
  Recorder(const Scenario& sc, Report& report) : sc_(sc), report_(report) {
    for (const auto& c : kCsvColumns)
      if (c != "t") labels_.push_back(c);
    auto add_norm = [&](double p) {
      const std::string l = norm_label(p);
      if (std::find(labels_.begin(), labels_.end(), l) == labels_.end()) {
        labels_.push_back(l);
        extra_norms_.emplace_back(p, l);
      }
    };
    for (double p : sc.diagnostics.norms) add_norm(p);
    if (sc.checks.lr_growth) add_norm(sc.checks.lr_growth->r);
    if (sc.checks.lp_trend) add_norm(sc.checks.lp_trend->p);
    if (std::find(labels_.begin(), labels_.end(), "l1") == labels_.end()) add_norm(1.0);
    for (const auto& l : labels_) report_.series.push_back(dg::TimeSeries{l, {}, {}});
    report_.front.level = sc.diagnostics.front_level.value_or(sc.params.a / (2.0 * sc.params.b));
  }

  void sample(const State& s) {
    const Params& p = sc_.params;
    const double guard = sc_.diagnostics.guard;
    now_ = s.t;
    dg::append_front_sample(report_.front, s.t, s.u, guard);
    const bool valid = report_.front.valid.back();
    const auto dist = dg::equilibrium_distance(s.u, s.v, p, dg::kInf);
    const auto cstar = dg::cstar_functional(s.u, s.v, p, 0.0);

    put("mass", s.u.grid.cell_volume() * kernels::active::sum(s.u.span()));
    put("l2", dg::lp_norm(s.u, 2.0));
    put("linf", dg::lp_norm(s.u, dg::kInf));
    put("front_radius", report_.front.radii.back());
    put("front_valid", valid ? 1.0 : 0.0);
    put("dist_u_ab", dist.du);
    put("dist_v_ab", dist.dv);
    put("min_u", kernels::active::min_value(s.u.span()));
    put("cstar_min", cstar.speed_min);
    for (const auto& [pp, label] : extra_norms_) put(label, dg::lp_norm(s.u, pp));

    if (sc_.checks.boundary_guard) {
      const auto g = dg::boundary_guard(s.u, sc_.diagnostics.far_value, guard);
      guard_worst_ = std::max(guard_worst_, g.worst);
      if (!g.pass && !guard_breached_) {
        guard_breached_ = true;
        std::ostringstream m;
        m << "deviation " << g.worst << " from far-field value on the guard shell";
        report_.events.push_back({"guard_breach", s.t, m.str(), false});
      }
    }
    if (sc_.diagnostics.snapshots) report_.snapshots.push_back({s.t, s.u, s.v});
    if (valid) last_valid_ = SampleSnapshot{s.t, s.u, s.v};
  }

  double guard_worst() const { return guard_worst_; }
  bool guard_breached() const { return guard_breached_; }
  const std::optional<SampleSnapshot>& last_valid() const { return last_valid_; }

 private:
  void put(const std::string& label, double value) {
    for (auto& ts : report_.series)
      if (ts.label == label) {
        ts.push(now_, value);
        return;
      }
  }

  const Scenario& sc_;
  Report& report_;
  std::vector<std::string> labels_;
  std::vector<std::pair<double, std::string>> extra_norms_;
  double now_ = 0.0;
  double guard_worst_ = 0.0;
  bool guard_breached_ = false;
  std::optional<SampleSnapshot> last_valid_;
};

CheckVerdict verdict(std::string name, bool asserted, bool pass, double measured, double bound, std::string detail) {
  return CheckVerdict{std::move(name), asserted, pass, measured, bound, std::move(detail)};
}

// Value of `series` at the first sample with time >= t (within rounding).
std::optional<double> value_at(const dg::TimeSeries& series, double t) {
  for (std::size_t i = 0; i < series.size(); ++i)
    if (series.times[i] >= t - 1e-9 * std::max(1.0, t)) return series.values[i];
  return std::nullopt;
}

}  // namespace

Report run(const Scenario& scenario) {
  const auto wall_start = std::chrono::steady_clock::now();
  validate(scenario);
  Report report;
  report.scenario = scenario;
  const Params& p = scenario.params;
  report.regime = reference::classify(p);

  const Grid grid = make_grid(scenario.grid.dim, scenario.grid.n, scenario.grid.half_width);
  Field u0 = ic::realize(scenario.initial, grid, scenario.diagnostics.guard);
  const double u0_sup = dg::lp_norm(u0, dg::kInf);
  const double u0_min = kernels::active::min_value(u0.span());
  const StepControl control = resolve_defaults(scenario.stepping, u0_sup, p);
  State state = make_state(std::move(u0));

  Recorder rec(scenario, report);
  rec.sample(state);

  // Per-step monitors.
  const bool envelope_applies = report.regime.global_exists;
  double envelope_worst = -dg::kInf;
  double envelope_tol = scenario.checks.envelope ? scenario.checks.envelope->tol : 1e-6;
  std::ptrdiff_t envelope_first_fail = -1;
  dg::CheckResult sandwich = dg::sandwich_check(state.u, state.v);
  bool stability_warned = false;
  const double dt_reference = stable_dt(grid, p, std::max({1.0, u0_sup, p.a / p.b}));

  const auto n_steps = static_cast<std::int64_t>(std::ceil(control.t_end / control.dt - 1e-9));
  const double sample_every = scenario.diagnostics.sample_every;
  std::int64_t next_sample = 1;
  Stepper stepper(grid, p, control);

  try {
    for (std::int64_t k = 0; k < n_steps; ++k) {
      const double sup_before = kernels::active::max_value(state.u.span());
      const double allowed_dt = stable_dt(grid, p, std::max(sup_before, 0.0));
      if (allowed_dt < 1e-4 * dt_reference) {
        std::ostringstream m;
        m << "stable step " << allowed_dt << " collapsed below 1e-4 of its reference " << dt_reference;
        throw BlowupDetected(m.str(), state.t);
      }
      if (control.dt > allowed_dt && !stability_warned) {
        stability_warned = true;
        std::ostringstream m;
        m << "dt = " << control.dt << " exceeds the stability heuristic " << allowed_dt;
        report.events.push_back({"stability_warning", state.t, m.str(), false});
      }

      stepper.advance(state);
      state.t = static_cast<double>(state.step_count) * control.dt;

      if (scenario.checks.sandwich) {
        const auto s = dg::sandwich_check(state.u, state.v);
        if (s.worst > sandwich.worst) sandwich.worst = s.worst;
        if (!s.pass && sandwich.pass) {
          sandwich.pass = false;
          sandwich.index = static_cast<std::ptrdiff_t>(state.step_count);
        }
      }
      if (envelope_applies) {
        const double bound = reference::upper_envelope(state.t, u0_sup, p) + envelope_tol;
        const double excess = kernels::active::max_value(state.u.span()) - bound;
        envelope_worst = std::max(envelope_worst, excess);
        if (excess > 0.0 && envelope_first_fail < 0) envelope_first_fail = state.step_count;
      }

      const bool last = k + 1 == n_steps;
      if (last || state.t >= next_sample * sample_every - 1e-9 * control.dt) {
        while (next_sample * sample_every <= state.t + 1e-9 * control.dt) ++next_sample;
        rec.sample(state);
      }
    }
    report.completed = true;
  } catch (const SolverEvent& e) {
    report.events.push_back({e.kind(), e.time(), e.what(), true});
  }
  report.t_final = state.t;
  report.steps = state.step_count;

  // Speed estimate.
  const dg::Window window = scenario.diagnostics.speed_window.value_or(dg::default_speed_window(report.front));
  try {
    report.speed = dg::estimate_speed(report.front, window);
  } catch (const InvalidArgument& e) {
    if (scenario.checks.speed || scenario.checks.spreading)
      report.events.push_back({"speed_unavailable", report.t_final, e.what(), false});
  }

  // Verdicts. Theorem checks are asserted only when their hypothesis holds.
  const auto& checks = scenario.checks;
  const auto& reg = report.regime;
  const bool compact_data = ic::support_radius(scenario.initial) > 0.0 &&
                            scenario.initial.kind != ic::Kind::constant_plus_bump;

  if (checks.sandwich)
    report.checks.push_back(verdict("sandwich", true, sandwich.pass, sandwich.worst,
                                    1e-12, "max over steps of v outside [min u, max u]"));
  if (checks.boundary_guard)
    report.checks.push_back(verdict("boundary_guard", true, !rec.guard_breached(), rec.guard_worst(),
                                    1e-6 * (1.0 + std::abs(scenario.diagnostics.far_value)),
                                    "max |u - far_value| on the guard shell over samples"));
  if (checks.lr_growth) {
    const double r = checks.lr_growth->r;
    const auto* series = report.find_series(norm_label(r));
    const double u0_norm = series->values.front();
    const auto res = dg::check_lr_growth(*series, u0_norm, p.a, checks.lr_growth->tol);
    const bool asserted = r <= reg.max_safe_r;
    report.checks.push_back(verdict("lr_growth", asserted, res.pass, res.worst, 0.0,
                                    "max of |u|_r - |u0|_r exp(a t)(1+tol); r = " + norm_label(r)));
  }
  if (checks.mass_nonincreasing) {
    const auto res = dg::check_nonincreasing(*report.find_series("mass"), checks.mass_nonincreasing->tol);
    const bool asserted = p.a == 0.0 && reg.global_exists;
    report.checks.push_back(verdict("mass_nonincreasing", asserted, res.pass, res.worst, 0.0,
                                    "max increase of mass between samples beyond tol"));
  }
  if (checks.envelope) {
    if (envelope_applies) {
      report.checks.push_back(verdict("envelope", true, envelope_first_fail < 0, envelope_worst, 0.0,
                                      "max over steps of max u - (U(t) + tol)"));
      if (checks.envelope->final_max) {
        const double final_sup = report.find_series("linf")->values.back();
        const bool pass = report.completed && final_sup <= *checks.envelope->final_max;
        report.checks.push_back(verdict("envelope_final", true, pass, final_sup, *checks.envelope->final_max,
                                        "sup norm at t_end"));
      }
    } else {
      report.checks.push_back(verdict("envelope", false, false, 0.0, 0.0, "chi > b: no logistic envelope"));
    }
  }
  if (checks.equilibrium) {
    const auto& eq = *checks.equilibrium;
    const bool asserted = reg.stability && u0_min > 0.0;
    const auto* du = report.find_series("dist_u_ab");
    const auto* dv = report.find_series("dist_v_ab");
    auto total = [&](double t) -> std::optional<double> {
      auto a = value_at(*du, t);
      auto b = value_at(*dv, t);
      if (!a || !b) return std::nullopt;
      return *a + *b;
    };
    const auto at = total(eq.by_time);
    report.checks.push_back(verdict("equilibrium", asserted, at && *at <= eq.tol, at.value_or(dg::kInf), eq.tol,
                                    "|u - a/b|_inf + |v - a/b|_inf at by_time"));
    if (eq.trend_from) {
      const auto early = total(*eq.trend_from);
      const bool pass = at && early && *at < *early;
      report.checks.push_back(verdict("equilibrium_trend", asserted, pass, at.value_or(dg::kInf),
                                      early.value_or(dg::kInf), "distance at by_time below distance at trend_from"));
    }
  }
  if (checks.speed) {
    const bool asserted = reg.spreading;
    const bool have = report.speed.has_value();
    const double c = have ? report.speed->speed : std::nan("");
    report.checks.push_back(verdict("speed", asserted, have && c >= checks.speed->min && c <= checks.speed->max, c,
                                    checks.speed->min, "least-squares front speed within [min, max]"));
  }
  if (checks.spreading) {
    const auto& sp = *checks.spreading;
    const bool asserted = reg.spreading && compact_data;
    const bool have = report.speed.has_value() && rec.last_valid().has_value();
    const double c = report.speed ? report.speed->speed : std::nan("");
    const bool c_ok = have && std::isfinite(c) && c > 0.0;
    report.checks.push_back(verdict("speed_positive", asserted, c_ok, c, 0.0, "measured speed finite and positive"));
    if (c_ok) {
      const auto& snap = *rec.last_valid();
      const double inner_r = sp.inner_fraction * c * snap.t;
      const double outer_r = sp.outer_fraction * c * snap.t;
      const auto inner = dg::equilibrium_distance(snap.u, snap.v, p, inner_r);
      const double outer = dg::outer_sup(snap.u, outer_r);
      std::ostringstream at;
      at << "at t = " << snap.t;
      report.checks.push_back(verdict("spreading_inner", asserted, inner.du <= sp.inner_tol, inner.du, sp.inner_tol,
                                      "sup_{|x| <= inner c t} |u - a/b| " + at.str()));
      report.checks.push_back(verdict("spreading_outer", asserted, outer <= sp.outer_tol, outer, sp.outer_tol,
                                      "sup_{|x| >= outer c t} u " + at.str()));
      double cstar = -dg::kInf;
      try {
        cstar = dg::cstar_functional(snap.u, snap.v, p, outer_r).speed_min;
      } catch (const InvalidArgument&) {
      }
      report.checks.push_back(verdict("cstar_positive", asserted, cstar > 0.0, cstar, 0.0,
                                      "min of 2 sqrt(a - chi v) - chi |grad v| over |x| >= outer c t " + at.str()));
    } else {
      for (const char* name : {"spreading_inner", "spreading_outer", "cstar_positive"})
        report.checks.push_back(verdict(name, asserted, false, std::nan(""), 0.0, "no speed estimate"));
    }
  }
  if (checks.lp_trend) {
    const auto* s = report.find_series(norm_label(checks.lp_trend->p));
    const double half = 0.5 * report.t_final;
    bool pass = report.completed;
    double worst = -dg::kInf;
    std::size_t considered = 0;
    for (std::size_t i = 1; i < s->size(); ++i) {
      if (s->times[i - 1] < half) continue;
      ++considered;
      worst = std::max(worst, s->values[i - 1] - s->values[i]);
      if (!(s->values[i] > s->values[i - 1])) pass = false;
    }
    if (considered == 0) pass = false;
    report.checks.push_back(verdict("lp_trend", reg.spreading, pass, worst, 0.0,
                                    "|u|_p strictly increasing over the last half; worst decrease shown"));
  }

  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return report;
}

}  // namespace ks
