#include "ks/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#ifdef KS_HAVE_OPENMP
#include <omp.h>
#endif

namespace ks::kernels {

int thread_count() {
#ifdef KS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

void scale(std::span<cplx> c, std::span<const double> m) {
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= m[i];
}

void scale_into(std::span<const cplx> in, std::span<const double> m, std::span<cplx> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * m[i];
}

void imul_into(std::span<const cplx> in, std::span<const double> k, std::span<cplx> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = cplx(-k[i] * in[i].imag(), k[i] * in[i].real());
}

void imul_accumulate(std::span<const cplx> in, std::span<const double> k, std::span<cplx> acc) {
  for (std::size_t i = 0; i < in.size(); ++i) acc[i] += cplx(-k[i] * in[i].imag(), k[i] * in[i].real());
}

void product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
}

void reaction(std::span<const double> u, double growth, double damping, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = growth * u[i] - damping * u[i] * u[i];
}

void etd_predict(std::span<const cplx> u0, std::span<const double> lin, std::span<const double> phi,
                 std::span<const cplx> f, std::span<cplx> out) {
  for (std::size_t i = 0; i < u0.size(); ++i) out[i] = lin[i] * u0[i] + phi[i] * f[i];
}

void etd_correct(std::span<const cplx> pred, std::span<const double> phi, std::span<const cplx> f_pred,
                 std::span<const cplx> f0, std::span<cplx> out) {
  for (std::size_t i = 0; i < pred.size(); ++i) out[i] = pred[i] + phi[i] * (f_pred[i] - f0[i]);
}

void combine(double alpha, std::span<const cplx> x, double beta, std::span<const cplx> y, std::span<cplx> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i] + beta * y[i];
}

void to_complex(std::span<const double> in, std::span<cplx> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = cplx(in[i], 0.0);
}

void real_part(std::span<const cplx> in, double scale, std::span<double> out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = scale * in[i].real();
}

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double sum_abs_pow(std::span<const double> x, double p) {
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), p);
  return s;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double min_value(std::span<const double> x) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : x) m = std::min(m, v);
  return m;
}

double max_value(std::span<const double> x) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : x) m = std::max(m, v);
  return m;
}

bool all_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace serial

namespace omp {

namespace {

// Below this many points the fork/join cost dominates.
constexpr std::ptrdiff_t kParallelMin = 4096;

using Index = std::ptrdiff_t;

Index len(auto const& s) { return static_cast<Index>(s.size()); }

// Deterministic blocked reduction: block b of T covers [b*n/T, (b+1)*n/T).
template <class Init, class Block, class Combine>
auto blocked_reduce(Index n, Init init, Block block, Combine combine) {
  using T = decltype(init);
  if (n < kParallelMin) return block(Index{0}, n);
  const int threads = thread_count();
  std::vector<T> partial(static_cast<std::size_t>(threads), init);
#pragma omp parallel num_threads(threads)
  {
#ifdef KS_HAVE_OPENMP
    const int t = omp_get_thread_num();
#else
    const int t = 0;
#endif
    const Index lo = n * t / threads;
    const Index hi = n * (t + 1) / threads;
    partial[static_cast<std::size_t>(t)] = block(lo, hi);
  }
  T acc = partial[0];
  for (int t = 1; t < threads; ++t) acc = combine(acc, partial[static_cast<std::size_t>(t)]);
  return acc;
}

}  // namespace

void scale(std::span<cplx> c, std::span<const double> m) {
  const Index n = len(c);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (Index i = 0; i < n; ++i) c[i] *= m[i];
}

void scale_into(std::span<const cplx> in, std::span<const double> m, std::span<cplx> out) {
  const Index n = len(in);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (Index i = 0; i < n; ++i) out[i] = in[i] * m[i];
}

void imul_into(std::span<const cplx> in, std::span<const double> k, std::span<cplx> out) {
  const Index n = len(in);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (Index i = 0; i < n; ++i) out[i] = cplx(-k[i] * in[i].imag(), k[i] * in[i].real());
}

void imul_accumulate(std::span<const cplx> in, std::span<const double> k, std::span<cplx> acc) {
  const Index n = len(in);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (Index i = 0; i < n; ++i) acc[i] += cplx(-k[i] * in[i].imag(), k[i] * in[i].real());
}

void product(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  const Index n = len(a);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (Index i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void reaction(std::span<const double> u, double growth, double damping, std::span<double> out) {
  const Index n = len(u);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (Index i = 0; i < n; ++i) out[i] = growth * u[i] - damping * u[i] * u[i];
}

void etd_predict(std::span<const cplx> u0, std::span<const double> lin, std::span<const double> phi,
                 std::span<const cplx> f, std::span<cplx> out) {
  const Index n = ssize(u0);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (Index i = 0; i < n; ++i) out[i] = lin[i] * u0[i] + phi[i] * f[i];
}

void etd_correct(std::span<const cplx> pred, std::span<const double> phi, std::span<const cplx> f_pred,
                 std::span<const cplx> f0, std::span<cplx> out) {
  const Index n = len(pred);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (Index i = 0; i < n; ++i) out[i] = pred[i] + phi[i] * (f_pred[i] - f0[i]);
}

void combine(double alpha, std::span<const cplx> x, double beta, std::span<const cplx> y, std::span<cplx> out) {
  const Index n = len(x);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (Index i = 0; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void to_complex(std::span<const double> in, std::span<cplx> out) {
  const Index n = len(in);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (Index i = 0; i < n; ++i) out[i] = cplx(in[i], 0.0);
}

void real_part(std::span<const cplx> in, double scale, std::span<double> out) {
  const Index n = len(in);
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
  for (Index i = 0; i < n; ++i) out[i] = scale * in[i].real();
}

double sum(std::span<const double> x) {
  return blocked_reduce(
      len(x), 0.0,
      [&](Index lo, Index hi) { return serial::sum(x.subspan(lo, hi - lo)); },
      [](double a, double b) { return a + b; });
}

double sum_abs_pow(std::span<const double> x, double p) {
  return blocked_reduce(
      len(x), 0.0,
      [&](Index lo, Index hi) { return serial::sum_abs_pow(x.subspan(lo, hi - lo), p); },
      [](double a, double b) { return a + b; });
}

double max_abs(std::span<const double> x) {
  return blocked_reduce(
      len(x), 0.0,
      [&](Index lo, Index hi) { return serial::max_abs(x.subspan(lo, hi - lo)); },
      [](double a, double b) { return std::max(a, b); });
}

double min_value(std::span<const double> x) {
  return blocked_reduce(
      len(x), std::numeric_limits<double>::infinity(),
      [&](Index lo, Index hi) { return serial::min_value(x.subspan(lo, hi - lo)); },
      [](double a, double b) { return std::min(a, b); });
}

double max_value(std::span<const double> x) {
  return blocked_reduce(
      len(x), -std::numeric_limits<double>::infinity(),
      [&](Index lo, Index hi) { return serial::max_value(x.subspan(lo, hi - lo)); },
      [](double a, double b) { return std::max(a, b); });
}

bool all_finite(std::span<const double> x) {
  return blocked_reduce(
      len(x), true,
      [&](Index lo, Index hi) { return serial::all_finite(x.subspan(lo, hi - lo)); },
      [](bool a, bool b) { return a && b; });
}

}  // namespace omp

}  // namespace ks::kernels
