#include "ks/helmholtz.hpp"

#include <vector>

#include "ks/kernels.hpp"

namespace ks::helmholtz {

namespace {

std::vector<double> resolvent_multiplier(const Grid& g) {
  const auto k2 = g.k_squared();
  std::vector<double> m(k2.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = 1.0 / (1.0 + k2[i]);
  return m;
}

}  // namespace

Field solve(const Field& u) {
  SpectralField s = to_spectral(u);
  kernels::active::scale(s.coefficients, resolvent_multiplier(u.grid));
  return to_physical(s);
}

VectorField grad_potential(const Field& u) {
  SpectralField s = to_spectral(u);
  kernels::active::scale(s.coefficients, resolvent_multiplier(u.grid));
  VectorField out;
  std::vector<cplx> buf(u.size());
  for (int a = 0; a < u.grid.dim(); ++a) {
    kernels::active::imul_into(s.coefficients, u.grid.k_axis(a), buf);
    u.grid.fft_backward(buf, buf);
    Field d(u.grid);
    kernels::active::real_part(buf, 1.0, d.span());
    out.push_back(std::move(d));
  }
  return out;
}

double residual(const Field& u, const Field& v) {
  require_same_grid(u.grid, v.grid);
  const Field lap = laplacian(v);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(lap[i] - v[i] + u[i]));
  return worst;
}

}  // namespace ks::helmholtz
