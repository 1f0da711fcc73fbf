#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ks/diagnostics.hpp"
#include "ks/error.hpp"
#include "ks/helmholtz.hpp"
#include "ks/icfactory.hpp"
#include "ks/reference.hpp"
#include "ks/semigroup.hpp"

using namespace ks;
namespace dg = ks::diagnostics;

namespace {

// Guard zero lets the bump reach the box edge on purpose.
Field bump(const Grid& g, double radius, double height = 1.0, double width = 0.5) {
  ic::ICSpec s;
  s.kind = ic::Kind::smoothed_indicator;
  s.radius = radius;
  s.width = width;
  s.amplitude = height;
  return ic::realize(s, g, 0.0);
}

dg::FrontTrace linear_trace(double c, double offset, int n, double sigma = 0.0, unsigned seed = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma > 0 ? sigma : 1.0);
  dg::FrontTrace t;
  for (int i = 0; i < n; ++i) {
    const double time = 0.5 * i;
    t.times.push_back(time);
    t.radii.push_back(offset + c * time + (sigma > 0 ? noise(rng) : 0.0));
    t.valid.push_back(true);
  }
  return t;
}

}  // namespace

TEST_CASE("lp_norm examples") {
  const Grid g = make_grid(1, 128, 7.0);
  CHECK(dg::lp_norm(Field(g, 1.0), 1) == doctest::Approx(14.0).epsilon(1e-14));
  CHECK(dg::lp_norm(bump(g, 2.0, 3.5), dg::kInf) == 3.5);
  CHECK_THROWS_AS(dg::lp_norm(Field(g, 1.0), 0.5), InvalidArgument);

  const Grid wide = make_grid(1, 2048, 30.0);
  for (double rs : {0.5, 1.0, 1.5, 2.0}) {
    const Field G = sample(wide, [&](std::span<const double> x) { return semigroup::heat_kernel(x, rs * rs, 1); });
    CHECK(std::abs(dg::lp_norm(G, 1) - 1.0) <= 1e-8);
  }
}

TEST_CASE("Hoelder interpolation between L1 and Lp") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Grid g = make_grid(1 + trial % 2, trial % 2 ? 32 : 256, 3.0);
    Field f(g);
    for (auto& x : f.values) x = d(rng) * std::exp(3 * d(rng));
    for (double p : {2.0, 4.0, dg::kInf})
      for (double r : {1.5, 2.0, 3.0}) {
        if (!(r < p)) continue;
        const double lam = (1 / r - 1 / p) / (1 - 1 / p);
        const double rhs = std::pow(dg::lp_norm(f, 1), lam) * std::pow(dg::lp_norm(f, p), 1 - lam);
        CHECK(dg::lp_norm(f, r) <= rhs * (1 + 1e-12));
      }
  }
}

TEST_CASE("check_lr_growth") {
  // Spatially constant data below a/b follows the logistic curve, which
  // stays under c e^{at}.
  dg::TimeSeries s{"linf", {}, {}};
  for (int i = 0; i <= 40; ++i) s.push(0.25 * i, reference::logistic_exact(0.3, 1.0, 1.0, 0.25 * i));
  auto r = dg::check_lr_growth(s, 0.3, 1.0, 1e-6);
  CHECK(r.pass);
  CHECK(r.worst <= 0.0);

  r = dg::check_lr_growth(s, 0.3 / (1 + 1e-3), 1.0, 1e-6);
  CHECK_FALSE(r.pass);
  CHECK(r.index == 0);

  s.values[30] = 0.3 * std::exp(s.times[30]) * 1.01;
  r = dg::check_lr_growth(s, 0.3, 1.0, 1e-6);
  CHECK_FALSE(r.pass);
  CHECK(r.index == 30);
}

TEST_CASE("check_nonincreasing") {
  dg::TimeSeries s{"mass", {}, {}};
  for (int i = 0; i < 10; ++i) s.push(i, 5.0 / (1 + i));
  CHECK(dg::check_nonincreasing(s, 1e-8).pass);
  s.values[6] = s.values[5] * (1 + 1e-7);
  const auto r = dg::check_nonincreasing(s, 1e-8);
  CHECK_FALSE(r.pass);
  CHECK(r.index == 6);
}

TEST_CASE("time series must advance") {
  dg::TimeSeries s{"x", {}, {}};
  s.push(0.0, 1.0);
  CHECK_THROWS_AS(s.push(0.0, 2.0), InvalidArgument);
}

TEST_CASE("front radius and trace") {
  const Grid g = make_grid(1, 512, 20.0);
  CHECK(dg::front_radius(bump(g, 5.0, 0.3), 0.5) == 0.0);
  const Field b = bump(g, 5.0, 1.0, 0.01);
  CHECK(std::abs(dg::front_radius(b, 0.5) - 5.0) <= g.spacing());

  std::vector<dg::Snapshot> snaps = {{0.0, bump(g, 5.0)}, {1.0, bump(g, 10.0)}, {2.0, bump(g, 18.4)}};
  const auto t = dg::front_trace(snaps, 0.5, 0.1);
  REQUIRE(t.valid.size() == 3);
  CHECK(t.valid[0]);
  CHECK(t.valid[1]);
  CHECK_FALSE(t.valid[2]);
  CHECK_THROWS_AS(dg::front_trace(snaps, 0.0, 0.1), InvalidArgument);
}

TEST_CASE("estimate_speed") {
  const auto exact = linear_trace(3.0, 1.0, 20);
  const auto e = dg::estimate_speed(exact, {-dg::kInf, dg::kInf});
  CHECK(e.speed == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(e.std_error <= 1e-12);
  CHECK(e.samples == 20);

  int within = 0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    const auto noisy = linear_trace(2.0, 0.0, 60, 0.01, seed);
    const auto n = dg::estimate_speed(noisy, dg::default_speed_window(noisy));
    within += std::abs(n.speed - 2.0) <= 3 * n.std_error ? 1 : 0;
  }
  CHECK(within >= 18);

  auto dead = exact;
  dead.valid.assign(dead.valid.size(), false);
  CHECK_THROWS_AS(dg::estimate_speed(dead, {-dg::kInf, dg::kInf}), InvalidArgument);
}

TEST_CASE("default speed window is the last half of the valid trace") {
  auto t = linear_trace(1.0, 0.0, 21);  // times 0 .. 10
  for (std::size_t i = 17; i < 21; ++i) t.valid[i] = false;  // valid up to t = 8
  const auto w = dg::default_speed_window(t);
  CHECK(w.begin == doctest::Approx(4.0));
  CHECK(w.end == doctest::Approx(8.0));
}

TEST_CASE("cstar functional") {
  const Grid g = make_grid(1, 128, 10.0);
  const Params p{0.3, 1.5, 1.0, 1};
  const auto zero = dg::cstar_functional(Field(g), Field(g), p, 0.0);
  CHECK(zero.speed_min == doctest::Approx(2 * std::sqrt(1.5)));
  CHECK(zero.undefined == 0);

  const Field u = bump(g, 3.0, 2.0);
  const Field v = helmholtz::solve(u);
  const auto free = dg::cstar_functional(u, v, Params{0.0, 1.5, 1.0, 1}, 0.0);
  CHECK(free.speed_min == doctest::Approx(2 * std::sqrt(1.5)));

  // Raising v with grad v fixed never raises the functional.
  const auto grad = helmholtz::grad_potential(u);
  double prev = dg::kInf;
  for (double shift : {0.0, 0.2, 0.5, 1.0}) {
    Field vs = v;
    for (auto& x : vs.values) x += shift;
    const double c = dg::cstar_functional(vs, grad, p, 0.0).speed_min;
    CHECK(c <= prev);
    prev = c;
  }
  CHECK_THROWS_AS(dg::cstar_functional(u, v, p, 100.0), InvalidArgument);
}

TEST_CASE("equilibrium distance") {
  const Grid g = make_grid(2, 16, 5.0);
  const Params p{0.2, 2.0, 4.0, 2};
  const auto d0 = dg::equilibrium_distance(Field(g, 0.5), Field(g, 0.5), p, dg::kInf);
  CHECK(d0.du == 0.0);
  CHECK(d0.dv == 0.0);
  const Field u(g, 0.6);
  const auto d1 = dg::equilibrium_distance(u, helmholtz::solve(u), p, dg::kInf);
  CHECK(d1.du == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(d1.dv == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("outer_sup") {
  const Grid g = make_grid(1, 256, 20.0);
  const Field b = bump(g, 4.0);
  CHECK(dg::outer_sup(b, 10.0) == 0.0);
  CHECK(dg::outer_sup(b, 1.0) == 1.0);
  CHECK(dg::outer_sup(b, 1e9) == 0.0);
}

TEST_CASE("sandwich check") {
  const Grid g = make_grid(1, 512, 30.0);
  const Field c(g, 2.0);
  CHECK(dg::sandwich_check(c, helmholtz::solve(c)).pass);
  const Field u = sample(g, [](std::span<const double> x) { return std::exp(-x[0] * x[0] / 8); });
  Field v = helmholtz::solve(u);
  CHECK(dg::sandwich_check(u, v).pass);
  v[100] = 1.0 + 1e-3;
  const auto r = dg::sandwich_check(u, v);
  CHECK_FALSE(r.pass);
  CHECK(r.worst == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(r.index == 100);
}

TEST_CASE("boundary guard") {
  const Grid g = make_grid(2, 64, 20.0);
  CHECK(dg::boundary_guard(bump(g, 5.0), 0.0, 0.1).pass);
  CHECK_FALSE(dg::boundary_guard(bump(g, 18.4), 0.0, 0.1).pass);
  CHECK(dg::boundary_guard(Field(g, 0.4), 0.4, 0.1).pass);
  CHECK_THROWS_AS(dg::boundary_guard(Field(g), 0.0, 0.6), InvalidArgument);
  CHECK_THROWS_AS(dg::boundary_guard(Field(g), 0.0, 0.0), InvalidArgument);
}
