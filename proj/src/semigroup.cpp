#include "ks/semigroup.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "ks/error.hpp"
#include "ks/kernels.hpp"

namespace ks::semigroup {

namespace {

std::vector<double> propagator(const Grid& g, double t) {
  const auto k2 = g.k_squared();
  std::vector<double> m(k2.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::exp(-t * (1.0 + k2[i]));
  return m;
}

}  // namespace

double heat_kernel(std::span<const double> x, double t, int dim) {
  if (!(t > 0.0)) throw InvalidArgument("heat_kernel: t must be positive");
  if (dim != 1 && dim != 2 && dim != 3) throw InvalidArgument("heat_kernel: unsupported dim");
  if (static_cast<int>(x.size()) != dim) throw InvalidArgument("heat_kernel: point has wrong dimension");
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  return std::pow(4.0 * std::numbers::pi * t, -0.5 * dim) * std::exp(-r2 / (4.0 * t));
}

Field apply_T(double t, const Field& f) {
  if (!(t >= 0.0)) throw InvalidArgument("apply_T: t must be non-negative");
  if (t == 0.0) {
    require_finite(f);
    return f;
  }
  SpectralField s = to_spectral(f);
  kernels::active::scale(s.coefficients, propagator(f.grid, t));
  return to_physical(s);
}

Field apply_T_div(double t, std::span<const Field> w) {
  if (!(t > 0.0)) throw InvalidArgument("apply_T_div: t must be positive");
  if (w.empty()) throw InvalidArgument("apply_T_div: empty vector field");
  const Grid& g = w.front().grid;
  if (static_cast<int>(w.size()) != g.dim()) throw InvalidArgument("apply_T_div: component count must equal dim");
  for (const auto& c : w) require_same_grid(g, c.grid);
  std::vector<cplx> acc(g.size(), cplx{});
  for (int a = 0; a < g.dim(); ++a) {
    const SpectralField s = to_spectral(w[a]);
    kernels::active::imul_accumulate(s.coefficients, g.k_axis(a), acc);
  }
  kernels::active::scale(acc, propagator(g, t));
  g.fft_backward(acc, acc);
  Field out(g);
  kernels::active::real_part(acc, 1.0, out.span());
  return out;
}

}  // namespace ks::semigroup
