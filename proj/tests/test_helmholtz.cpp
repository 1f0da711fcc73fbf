#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ks/diagnostics.hpp"
#include "ks/error.hpp"
#include "ks/helmholtz.hpp"
#include "ks/verify/oracles.hpp"

using namespace ks;

namespace {

double sup(const Field& f) { return diagnostics::lp_norm(f, diagnostics::kInf); }

double sup_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Field random_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Field f(g);
  for (auto& x : f.values) x = d(rng);
  const double s = sup(f);
  for (auto& x : f.values) x /= s;
  return f;
}

}  // namespace

TEST_CASE("constant is a fixed point") {
  const Grid g = make_grid(2, 16, 5.0);
  CHECK(sup_diff(helmholtz::solve(Field(g, 3.0)), Field(g, 3.0)) <= 1e-14);
  for (const auto& c : helmholtz::grad_potential(Field(g, 3.0))) CHECK(sup(c) <= 1e-14);
}

TEST_CASE("cos(2x) is an eigenfunction") {
  const Grid g = make_grid(1, 64, std::numbers::pi);
  const Field u = sample(g, [](std::span<const double> x) { return std::cos(2 * x[0]); });
  const Field want = sample(g, [](std::span<const double> x) { return std::cos(2 * x[0]) / 5; });
  CHECK(sup_diff(helmholtz::solve(u), want) <= 1e-14);
  const auto gv = helmholtz::grad_potential(u);
  CHECK(sup_diff(gv[0], sample(g, [](std::span<const double> x) { return -0.4 * std::sin(2 * x[0]); })) <= 1e-14);
}

TEST_CASE("sandwich for nonnegative smooth bumps") {
  for (int dim : {1, 2}) {
    const Grid g = make_grid(dim, dim == 1 ? 512 : 128, 30.0);
    for (double w : {1.0, 2.0, 4.0}) {
      const Field u = sample(g, [&](std::span<const double> x) {
        double r2 = 0;
        for (double c : x) r2 += c * c;
        return 2.0 * std::exp(-r2 / (2 * w * w));
      });
      const auto res = diagnostics::sandwich_check(u, helmholtz::solve(u));
      CHECK(res.pass);
    }
  }
}

TEST_CASE("residual of the elliptic equation") {
  std::mt19937_64 rng(1);
  for (int dim : {1, 2}) {
    const Grid g = make_grid(dim, dim == 1 ? 256 : 32, 6.0);
    const Field u = random_field(g, rng);
    CHECK(helmholtz::residual(u, helmholtz::solve(u)) <= 1e-10 * sup(u));
  }
}

TEST_CASE("gradient bound over random fields") {
  std::mt19937_64 rng(2);
  double worst = -1.0;
  for (int i = 0; i < 100; ++i) {
    const int dim = 1 + i % 2;
    const Grid g = make_grid(dim, dim == 1 ? 256 : 32, 5.0);
    const Field u = random_field(g, rng);  // |u|_inf = 1
    const auto gv = helmholtz::grad_potential(u);
    for (std::size_t j = 0; j < u.size(); ++j) {
      double s = 0.0;
      for (const auto& c : gv) s += c[j] * c[j];
      worst = std::max(worst, std::sqrt(s) - std::sqrt(double(dim)));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("linearity") {
  std::mt19937_64 rng(3);
  const Grid g = make_grid(2, 32, 4.0);
  const Field u1 = random_field(g, rng), u2 = random_field(g, rng);
  Field mix(g);
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 0.7 * u1[i] - 2.5 * u2[i];
  const Field v1 = helmholtz::solve(u1), v2 = helmholtz::solve(u2);
  Field want(g);
  for (std::size_t i = 0; i < want.size(); ++i) want[i] = 0.7 * v1[i] - 2.5 * v2[i];
  CHECK(sup_diff(helmholtz::solve(mix), want) <= 1e-12);
}

TEST_CASE("agrees with direct quadrature of the Bessel potential") {
  const Grid g = make_grid(1, 1024, 40.0);
  auto prof = [](double x) { return std::exp(-0.5 * (x - 2) * (x - 2)) + 0.5 * std::exp(-x * x / 8); };
  const Field u = sample(g, [&](std::span<const double> x) { return prof(x[0]); });
  const Field v = helmholtz::solve(u);
  for (int j = 300; j < 724; j += 41) CHECK(std::abs(v[j] - oracle::bessel_potential_1d(prof, g.coordinate(j))) <= 1e-6);
}

TEST_CASE("non-finite input is rejected") {
  const Grid g = make_grid(1, 16, 1.0);
  Field u(g, 1.0);
  u[2] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(helmholtz::solve(u), NonFiniteError);
}
