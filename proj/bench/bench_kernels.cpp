// Serial reference kernels against their OpenMP counterparts, plus one full
// solver step for context.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "ks/grid.hpp"
#include "ks/kernels.hpp"
#include "ks/stepper.hpp"

namespace k = ks::kernels;
using k::cplx;

namespace {

struct Data {
  std::vector<double> u, m;
  std::vector<cplx> a, b, out;
  explicit Data(std::size_t n) : u(n), m(n), a(n), b(n), out(n) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = d(rng);
      m[i] = d(rng);
      a[i] = {d(rng), d(rng)};
      b[i] = {d(rng), d(rng)};
    }
  }
};

template <class Fn>
void run(benchmark::State& state, Fn fn) {
  Data d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    fn(d);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

#define KS_PAIR(name, body)                                                                  \
  void BM_serial_##name(benchmark::State& s) {                                               \
    namespace impl = k::serial;                                                              \
    run(s, [](Data& d) { body; });                                                           \
  }                                                                                          \
  void BM_omp_##name(benchmark::State& s) {                                                  \
    namespace impl = k::omp;                                                                 \
    run(s, [](Data& d) { body; });                                                           \
  }                                                                                          \
  BENCHMARK(BM_serial_##name)->RangeMultiplier(4)->Range(1 << 12, 1 << 20)->UseRealTime();   \
  BENCHMARK(BM_omp_##name)->RangeMultiplier(4)->Range(1 << 12, 1 << 20)->UseRealTime();

KS_PAIR(etd_predict, impl::etd_predict(d.a, d.m, d.u, d.b, d.out))
KS_PAIR(imul_accumulate, impl::imul_accumulate(d.a, d.m, d.out))
KS_PAIR(reaction, impl::reaction(d.u, 2.0, 1.0, d.m))
KS_PAIR(sum_abs_pow, benchmark::DoNotOptimize(impl::sum_abs_pow(d.u, 2.5)))
KS_PAIR(max_abs, benchmark::DoNotOptimize(impl::max_abs(d.u)))

void BM_stepper_advance_2d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ks::Grid g = ks::make_grid(2, n, 20.0);
  const ks::Field u0 = ks::sample(g, [](std::span<const double> x) { return std::exp(-(x[0] * x[0] + x[1] * x[1])); });
  ks::StepControl c;
  c.dt = 1e-3;
  c = ks::resolve_defaults(c, 1.0, ks::Params{0.3, 1.0, 1.0, 2});
  ks::Stepper stepper(g, ks::Params{0.3, 1.0, 1.0, 2}, c);
  ks::State s = ks::make_state(u0);
  for (auto _ : state) stepper.advance(s);
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_stepper_advance_2d)->Arg(128)->Arg(256)->Arg(512)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
