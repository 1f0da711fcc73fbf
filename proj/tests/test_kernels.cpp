#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ks/kernels.hpp"

namespace k = ks::kernels;
using k::cplx;

namespace {

struct Inputs {
  std::vector<double> u, m;
  std::vector<cplx> a, b;
  explicit Inputs(std::size_t n, unsigned seed = 9) : u(n), m(n), a(n), b(n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = d(rng);
      m[i] = d(rng);
      a[i] = {d(rng), d(rng)};
      b[i] = {d(rng), d(rng)};
    }
  }
};

// Sizes on both sides of the parallel threshold, including odd lengths.
const std::vector<std::size_t> kSizes = {1, 7, 1000, 4096, 100003};

}  // namespace

TEST_CASE("pointwise kernels: OpenMP matches serial exactly") {
  for (std::size_t n : kSizes) {
    Inputs in(n);
    std::vector<cplx> s(n), o(n);

    k::serial::scale_into(in.a, in.m, s);
    k::omp::scale_into(in.a, in.m, o);
    CHECK(s == o);

    k::serial::imul_into(in.a, in.m, s);
    k::omp::imul_into(in.a, in.m, o);
    CHECK(s == o);

    s = in.b;
    o = in.b;
    k::serial::imul_accumulate(in.a, in.m, s);
    k::omp::imul_accumulate(in.a, in.m, o);
    CHECK(s == o);

    k::serial::etd_predict(in.a, in.m, in.u, in.b, s);
    k::omp::etd_predict(in.a, in.m, in.u, in.b, o);
    CHECK(s == o);

    k::serial::etd_correct(in.a, in.m, in.b, in.a, s);
    k::omp::etd_correct(in.a, in.m, in.b, in.a, o);
    CHECK(s == o);

    k::serial::combine(0.3, in.a, -1.7, in.b, s);
    k::omp::combine(0.3, in.a, -1.7, in.b, o);
    CHECK(s == o);

    std::vector<double> rs(n), ro(n);
    k::serial::reaction(in.u, 2.0, 0.5, rs);
    k::omp::reaction(in.u, 2.0, 0.5, ro);
    CHECK(rs == ro);
    k::serial::product(in.u, in.m, rs);
    k::omp::product(in.u, in.m, ro);
    CHECK(rs == ro);
    k::serial::real_part(in.a, 0.25, rs);
    k::omp::real_part(in.a, 0.25, ro);
    CHECK(rs == ro);
  }
}

TEST_CASE("reductions: OpenMP agrees with serial and is reproducible") {
  for (std::size_t n : kSizes) {
    Inputs in(n);
    const double s = k::serial::sum(in.u);
    const double o = k::omp::sum(in.u);
    CHECK(std::abs(s - o) <= 1e-12 * std::max(1.0, std::abs(s)));
    CHECK(k::omp::sum(in.u) == o);  // same partition, same rounding
    CHECK(k::omp::sum_abs_pow(in.u, 3.0) == doctest::Approx(k::serial::sum_abs_pow(in.u, 3.0)).epsilon(1e-12));
    CHECK(k::omp::max_abs(in.u) == k::serial::max_abs(in.u));
    CHECK(k::omp::min_value(in.u) == k::serial::min_value(in.u));
    CHECK(k::omp::max_value(in.u) == k::serial::max_value(in.u));
  }
}

TEST_CASE("kernel semantics") {
  const std::vector<double> u = {1.0, -2.0, 3.0};
  std::vector<double> out(3);
  k::active::reaction(u, 2.0, 1.0, out);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == -8.0);
  CHECK(out[2] == -3.0);
  CHECK(k::active::sum(u) == 2.0);
  CHECK(k::active::max_abs(u) == 3.0);
  CHECK(k::active::sum_abs_pow(u, 2.0) == doctest::Approx(14.0));

  const std::vector<cplx> a = {{1.0, 2.0}};
  const std::vector<double> kk = {3.0};
  std::vector<cplx> o(1);
  k::active::imul_into(a, kk, o);
  CHECK(o[0] == cplx(-6.0, 3.0));
}

TEST_CASE("all_finite") {
  std::vector<double> x(5000, 1.0);
  CHECK(k::serial::all_finite(x));
  CHECK(k::omp::all_finite(x));
  x[4321] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(k::serial::all_finite(x));
  CHECK_FALSE(k::omp::all_finite(x));
  x[4321] = std::nan("");
  CHECK_FALSE(k::omp::all_finite(x));
}

TEST_CASE("thread count is positive") { CHECK(k::thread_count() >= 1); }
