#pragma once

// Time integration of u_t = (Delta - 1) u + F(u) with
//   F(u) = -chi div(u grad v) + (a + 1) u - b u^2,   v = (I - Delta)^{-1} u.
// The linear part is propagated exactly in Fourier space; F is handled by the
// second-order exponential Runge-Kutta scheme (ETDRK2).

#include <cstdint>
#include <vector>

#include "ks/grid.hpp"
#include "ks/params.hpp"

namespace ks {

struct Scenario;
struct Report;

struct State {
  double t = 0.0;
  Field u;
  Field v;  ///< always helmholtz::solve(u)
  std::int64_t step_count = 0;
};

/// Builds the state at time t from u, solving for v.
State make_state(Field u, double t = 0.0);

struct StepControl {
  double dt = 1e-2;
  double t_end = 1.0;
  bool dealias = true;
  /// Largest tolerated undershoot below zero; <= 0 means "use the default"
  /// 1e-10 (1 + |u0|_inf).
  double negativity_budget = 0.0;
  /// Sup-norm abort level; <= 0 means "use the default"
  /// 1e4 max(1, |u0|_inf, a/b).
  double blowup_threshold = 0.0;
};

/// Fills in the data-dependent defaults of `c` for initial data with
/// sup norm u0_sup. Throws InvalidArgument for dt <= 0 or t_end < 0.
StepControl resolve_defaults(StepControl c, double u0_sup, const Params& p);

/// F(u) above, formed pseudospectrally (products in physical space).
Field nonlinearity(const Field& u, const Params& p, bool dealias = true);

/// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2, series near 0.
double phi1(double z);
double phi2(double z);

/// Largest dt allowed by the advection and reaction heuristics at the given
/// sup norm: min(0.25 h / (chi sqrt(N) |u| + eps), 0.5 / (a + 2 b |u|)).
double stable_dt(const Grid& grid, const Params& p, double u_sup);

/// Reusable integrator: owns the multiplier tables and scratch buffers for
/// one (grid, params, dt, dealias) combination. Unset budgets in the control
/// are resolved from the first state advanced. Not thread safe; use one per
/// run.
class Stepper {
 public:
  Stepper(Grid grid, Params p, StepControl control);

  /// Advances s by one step. Throws NonFiniteState, BlowupDetected or
  /// NegativityViolation after the step when the new state is unacceptable;
  /// s is left at the rejected state so callers can inspect it.
  void advance(State& s);

  const StepControl& control() const noexcept { return control_; }
  const Params& params() const noexcept { return params_; }

  /// F-hat for a normalized coefficient vector (exposed for testing).
  void spectral_nonlinearity(std::span<const cplx> u_hat, std::span<cplx> f_hat);

 private:
  Grid grid_;
  Params params_;
  StepControl control_;
  std::vector<double> lin_, phi1dt_, phi2dt_, resolvent_;
  std::vector<cplx> u_hat_, f0_, pred_, fpred_, work_, acc_, tmp_;
  std::vector<double> u_phys_, grad_, flux_;
};

/// One step with freshly built tables; convenient but slower than Stepper.
State step(const State& s, const Params& p, const StepControl& c);

/// Runs a full scenario with diagnostics at the configured cadence. Solver
/// events end the trajectory and are recorded; the Report is always complete.
Report run(const Scenario& scenario);

}  // namespace ks
