#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ks/diagnostics.hpp"
#include "ks/error.hpp"
#include "ks/helmholtz.hpp"
#include "ks/icfactory.hpp"
#include "ks/reference.hpp"
#include "ks/report.hpp"
#include "ks/stepper.hpp"
#include "ks/verify/oracles.hpp"

using namespace ks;
namespace dg = ks::diagnostics;

namespace {

double sup_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Field integrate(const Field& u0, const Params& p, double dt, double t_end, bool dealias = true) {
  StepControl c;
  c.dt = dt;
  c.dealias = dealias;
  c.negativity_budget = 1e-6;  // spectral undershoot at the 1e-9 level is expected
  Stepper stepper(u0.grid, p, c);
  State s = make_state(u0);
  const auto n = std::llround(t_end / dt);
  for (long long i = 0; i < n; ++i) stepper.advance(s);
  return s.u;
}

Field gaussian(const Grid& g, double amp, double width) {
  ic::ICSpec s;
  s.kind = ic::Kind::gaussian;
  s.amplitude = amp;
  s.width = width;
  return ic::realize(s, g);
}

Scenario small_scenario() {
  Scenario s;
  s.name = "small";
  s.grid = {1, 256, 20.0};
  s.params = {0.3, 1.0, 1.0, 1};
  s.initial.kind = ic::Kind::gaussian;
  s.initial.width = 1.0;
  s.stepping.dt = 0.01;
  s.stepping.t_end = 1.0;
  s.checks.lr_growth = LrGrowthCheck{};
  s.checks.envelope = EnvelopeCheck{};
  return s;
}

}  // namespace

TEST_CASE("phi functions") {
  for (double z : {-30.0, -2.0, -0.6, -0.5, -0.3, -1e-3, -1e-9, 0.0, 1e-6, 0.4, 1.0}) {
    double p1, p2;
    if (std::abs(z) > 1e-2) {
      p1 = std::expm1(z) / z;
      p2 = (std::expm1(z) - z) / (z * z);
    } else {
      p1 = 1 + z / 2 + z * z / 6 + z * z * z / 24;
      p2 = 0.5 + z / 6 + z * z / 24 + z * z * z / 120;
    }
    CHECK(phi1(z) == doctest::Approx(p1).epsilon(1e-12));
    CHECK(phi2(z) == doctest::Approx(p2).epsilon(1e-9));
  }
  CHECK(phi1(0.0) == 1.0);
  CHECK(phi2(0.0) == 0.5);
  // No jump where the series branch hands over.
  CHECK(phi1(-0.5 + 1e-12) == doctest::Approx(phi1(-0.5 - 1e-12)).epsilon(1e-11));
  CHECK(phi2(-0.5 + 1e-12) == doctest::Approx(phi2(-0.5 - 1e-12)).epsilon(1e-11));
}

TEST_CASE("the k = 0 propagator is exact for F(u) = u") {
  // With a = b = 0 the mean mode obeys u' = -u + u = 0; one exponential
  // step returns c exactly: e^{-h} c + h phi1(-h) c = c.
  for (double h : {1e-4, 1e-2, 0.1, 1.0, 5.0}) CHECK(std::exp(-h) + h * phi1(-h) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("nonlinearity examples") {
  const Grid g = make_grid(2, 16, 4.0);
  const Params p{0.7, 1.5, 2.0, 2};
  const Field f = nonlinearity(Field(g, 0.4), p);
  for (double x : f.values) CHECK(x == doctest::Approx(2.5 * 0.4 - 2.0 * 0.16).epsilon(1e-14));
  const Field e = nonlinearity(Field(g, 0.75), p);
  for (double x : e.values) CHECK(x == doctest::Approx(0.75).epsilon(1e-14));

  const Grid g1 = make_grid(1, 128, std::numbers::pi);
  const Field u = sample(g1, [](std::span<const double> x) { return 1.0 + 0.5 * std::sin(x[0]); });
  const Params free{0.0, 1.5, 2.0, 1};
  for (bool dealias : {false, true}) {
    const Field n = nonlinearity(u, free, dealias);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(n[i] - (2.5 * u[i] - 2.0 * u[i] * u[i])) <= 1e-14);
  }
}

TEST_CASE("chemotaxis term matches a direct evaluation") {
  const Grid g = make_grid(1, 256, 20.0);
  const Params p{0.6, 1.0, 1.0, 1};
  const Field u = gaussian(g, 1.2, 1.5);
  const Field v = helmholtz::solve(u);
  const auto gv = gradient(v);
  Field flux(g);
  for (std::size_t i = 0; i < u.size(); ++i) flux[i] = u[i] * gv[0][i];
  const VectorField w = {flux};
  const Field div = divergence(w);
  Field want(g);
  for (std::size_t i = 0; i < u.size(); ++i) want[i] = -0.6 * div[i] + 2.0 * u[i] - u[i] * u[i];
  CHECK(sup_diff(nonlinearity(u, p, false), want) <= 1e-12);
  CHECK(sup_diff(nonlinearity(u, p, true), want) <= 1e-10);
}

TEST_CASE("the equilibrium a/b is a fixed point") {
  const Grid g = make_grid(2, 16, 5.0);
  const Params p{0.4, 2.0, 4.0, 2};
  StepControl c;
  c.dt = 0.1;
  State s = make_state(Field(g, 0.5));
  Stepper stepper(g, p, c);
  for (int i = 0; i < 50; ++i) stepper.advance(s);
  for (double x : s.u.values) CHECK(x == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(s.step_count == 50);
  CHECK(s.t == doctest::Approx(5.0));
}

TEST_CASE("uniform data follows the logistic ODE") {
  // ETDRK2 has an O(dt^2) error on the ODE: 1.2e-7 at dt = 1e-3 for these
  // data; 1e-8 needs dt <= 2.5e-4.
  const Grid g = make_grid(1, 32, 10.0);
  for (double c0 : {0.2, 0.5, 3.0}) {
    const Params p{0.7, 1.0, 1.0, 1};
    const double exact = reference::logistic_exact(c0, 1.0, 1.0, 1.0);
    const double e1 = std::abs(integrate(Field(g, c0), p, 1e-3, 1.0)[0] - exact);
    const double e4 = std::abs(integrate(Field(g, c0), p, 2.5e-4, 1.0)[0] - exact);
    CHECK(e1 <= 2e-7);
    CHECK(e4 <= 1e-8);
    CHECK(e1 / e4 == doctest::Approx(16.0).epsilon(0.05));
  }
}

TEST_CASE("chi = 0 agrees with an independent integrating-factor RK4") {
  const Grid g = make_grid(1, 256, 20.0);
  const Field u0 = gaussian(g, 1.0, 1.5);
  const Params p{0.0, 1.0, 1.0, 1};
  const Field ref = oracle::fisher_kpp_ifrk4(u0, 1.0, 1.0, 1.0, 1e-3 / 16);
  CHECK(sup_diff(integrate(u0, p, 1e-3, 1.0), ref) <= 1e-6);
  const Field fine = oracle::fisher_kpp_ifrk4(u0, 1.0, 1.0, 1.0, 1e-4);
  CHECK(sup_diff(integrate(u0, p, 1e-4, 1.0), fine) <= 1e-8);
}

TEST_CASE("second-order convergence in time") {
  const Grid g = make_grid(2, 64, 10.0);
  const Params p{0.5, 1.0, 1.0, 2};
  const Field u0 = gaussian(g, 1.5, 1.0);
  const Field a = integrate(u0, p, 0.04, 1.0);
  const Field b = integrate(u0, p, 0.02, 1.0);
  const Field c = integrate(u0, p, 0.01, 1.0);
  const double ratio = sup_diff(a, b) / sup_diff(b, c);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("the chemoattractant is re-solved every step") {
  const Grid g = make_grid(1, 128, 15.0);
  StepControl c;
  c.dt = 0.05;
  State s = make_state(gaussian(g, 2.0, 1.0));
  Stepper stepper(g, Params{0.8, 1.0, 1.0, 1}, c);
  for (int i = 0; i < 10; ++i) {
    stepper.advance(s);
    CHECK(helmholtz::residual(s.u, s.v) <= 1e-10 * dg::lp_norm(s.u, dg::kInf));
  }
  const State once = step(make_state(gaussian(g, 2.0, 1.0)), Params{0.8, 1.0, 1.0, 1}, c);
  State again = make_state(gaussian(g, 2.0, 1.0));
  Stepper(g, Params{0.8, 1.0, 1.0, 1}, c).advance(again);
  CHECK(once.u.values == again.u.values);
}

TEST_CASE("solver events") {
  const Grid g = make_grid(1, 64, 10.0);
  const Params p{0.3, 1.0, 1.0, 1};
  StepControl c;
  c.dt = 0.01;

  c.blowup_threshold = 0.5;
  CHECK_THROWS_AS(step(make_state(gaussian(g, 1.0, 1.0)), p, c), BlowupDetected);

  c.blowup_threshold = 0.0;
  Field dip = gaussian(g, 1.0, 1.0);
  dip[5] = -1e-3;
  CHECK_THROWS_AS(step(make_state(dip), p, c), NegativityViolation);

  Field bad(g, 1.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(make_state(bad), NonFiniteError);

  // A huge step on a large state overflows.
  StepControl wild;
  wild.dt = 50.0;
  wild.blowup_threshold = 1e300;
  wild.negativity_budget = 1e300;
  State s = make_state(Field(g, 1e200));
  Stepper stepper(g, Params{0.0, 1.0, 1.0, 1}, wild);
  CHECK_THROWS_AS(stepper.advance(s), NonFiniteState);
}

TEST_CASE("resolve_defaults and stable_dt") {
  const Params p{0.5, 2.0, 1.0, 1};
  StepControl c;
  c = resolve_defaults(c, 3.0, p);
  CHECK(c.negativity_budget == doctest::Approx(4e-10));
  CHECK(c.blowup_threshold == doctest::Approx(3e4));
  StepControl bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(resolve_defaults(bad, 1.0, p), InvalidArgument);
  bad.dt = 0.1;
  bad.t_end = -1.0;
  CHECK_THROWS_AS(resolve_defaults(bad, 1.0, p), InvalidArgument);

  const Grid g = make_grid(1, 64, 8.0);  // h = 0.25
  CHECK(stable_dt(g, p, 2.0) == doctest::Approx(std::min(0.25 * 0.25 / 1.0, 0.5 / 6.0)));
  CHECK(stable_dt(g, Params{0.0, 1.0, 1.0, 1}, 1.0) == doctest::Approx(0.5 / 3.0));
}

TEST_CASE("run with t_end = 0 records only the initial sample") {
  Scenario s = small_scenario();
  s.stepping.t_end = 0.0;
  const Report r = run(s);
  CHECK(r.completed);
  CHECK(r.steps == 0);
  for (const auto& ts : r.series) CHECK(ts.size() == 1);
}

TEST_CASE("benign run completes without events") {
  Scenario s = small_scenario();
  s.stepping.blowup_threshold = 1e6;
  const Report r = run(s);
  CHECK(r.completed);
  CHECK(r.events.empty());
  CHECK(r.ok());
  CHECK(r.t_final == doctest::Approx(1.0));
  CHECK(r.find_series("mass")->size() == 11);
}

TEST_CASE("runs are bit-identical") {
  Scenario s = small_scenario();
  s.initial.kind = ic::Kind::positive_random;
  s.initial.floor = 0.1;
  s.initial.seed = 11;
  s.checks.boundary_guard = false;
  const Report a = run(s), b = run(s);
  REQUIRE(a.series.size() == b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) CHECK(a.series[i].values == b.series[i].values);
}

TEST_CASE("a blow-up ends the run with a fatal event") {
  Scenario s = small_scenario();
  s.stepping.blowup_threshold = 1.05;
  s.initial.amplitude = 1.0;
  s.params = {0.0, 3.0, 1.0, 1};
  const Report r = run(s);
  CHECK_FALSE(r.completed);
  REQUIRE_FALSE(r.events.empty());
  CHECK(r.events.back().kind == "blowup");
  CHECK(r.events.back().fatal);
  CHECK_FALSE(r.ok());
}
