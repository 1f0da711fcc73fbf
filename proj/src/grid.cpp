#include "ks/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include "ks/error.hpp"
#include "ks/kernels.hpp"

namespace ks {

namespace {

// The FFTW planner is not thread safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) { return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p)); }

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

struct Grid::Impl {
  int dim = 1;
  int n = 8;
  double half_width = 1.0;
  double h = 0.25;
  std::size_t size = 8;
  std::vector<double> wavenumbers;
  std::vector<double> k_squared;
  std::vector<double> k_axis[2];
  std::vector<double> dealias;
  std::vector<double> radius;
  std::vector<double> sup_radius;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

Grid make_grid(int dim, int n, double half_width) {
  if (dim != 1 && dim != 2) throw InvalidArgument("grid: dim must be 1 or 2, got " + std::to_string(dim));
  if (n < 8 || !is_power_of_two(n))
    throw InvalidArgument("grid: n must be a power of two >= 8, got " + std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InvalidArgument("grid: half width L must be positive and finite");

  auto impl = std::make_shared<Grid::Impl>();
  impl->dim = dim;
  impl->n = n;
  impl->half_width = half_width;
  impl->h = 2.0 * half_width / n;
  impl->size = dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;

  const double dk = std::numbers::pi / half_width;
  impl->wavenumbers.resize(n);
  std::vector<double> deriv(n);
  std::vector<double> keep(n);
  for (int j = 0; j < n; ++j) {
    const int signed_j = j < n / 2 ? j : j - n;
    impl->wavenumbers[j] = dk * signed_j;
    deriv[j] = j == n / 2 ? 0.0 : dk * signed_j;
    keep[j] = 3 * std::abs(signed_j) < n ? 1.0 : 0.0;
  }
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) x[j] = -half_width + j * impl->h;

  const std::size_t m = impl->size;
  impl->k_squared.resize(m);
  impl->dealias.resize(m);
  impl->radius.resize(m);
  impl->sup_radius.resize(m);
  for (int a = 0; a < dim; ++a) impl->k_axis[a].resize(m);

  if (dim == 1) {
    for (int j = 0; j < n; ++j) {
      const double k = impl->wavenumbers[j];
      impl->k_squared[j] = k * k;
      impl->k_axis[0][j] = deriv[j];
      impl->dealias[j] = keep[j];
      impl->radius[j] = std::abs(x[j]);
      impl->sup_radius[j] = std::abs(x[j]);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t p = static_cast<std::size_t>(i) * n + j;
        const double ki = impl->wavenumbers[i];
        const double kj = impl->wavenumbers[j];
        impl->k_squared[p] = ki * ki + kj * kj;
        impl->k_axis[0][p] = deriv[i];
        impl->k_axis[1][p] = deriv[j];
        impl->dealias[p] = keep[i] * keep[j];
        impl->radius[p] = std::hypot(x[i], x[j]);
        impl->sup_radius[p] = std::max(std::abs(x[i]), std::abs(x[j]));
      }
    }
  }

  {
    // FFTW_ESTIMATE keeps the chosen algorithm, and therefore the rounding,
    // identical from run to run.
    std::lock_guard lock(planner_mutex());
    auto* buf = fftw_alloc_complex(m);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dim == 1) {
      impl->forward = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
      impl->backward = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
    } else {
      impl->forward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
      impl->backward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
    }
    fftw_free(buf);
  }
  if (!impl->forward || !impl->backward) throw std::runtime_error("grid: FFTW plan creation failed");
  return Grid(std::move(impl));
}

int Grid::dim() const noexcept { return impl_->dim; }
int Grid::n() const noexcept { return impl_->n; }
double Grid::half_width() const noexcept { return impl_->half_width; }
double Grid::spacing() const noexcept { return impl_->h; }
std::size_t Grid::size() const noexcept { return impl_->size; }
double Grid::cell_volume() const noexcept { return impl_->dim == 1 ? impl_->h : impl_->h * impl_->h; }
double Grid::nyquist() const noexcept { return std::numbers::pi * (impl_->n / 2) / impl_->half_width; }
std::span<const double> Grid::wavenumbers() const noexcept { return impl_->wavenumbers; }
double Grid::coordinate(int j) const noexcept { return -impl_->half_width + j * impl_->h; }
std::span<const double> Grid::k_squared() const noexcept { return impl_->k_squared; }
std::span<const double> Grid::dealias_mask() const noexcept { return impl_->dealias; }
std::span<const double> Grid::radius() const noexcept { return impl_->radius; }
std::span<const double> Grid::sup_radius() const noexcept { return impl_->sup_radius; }

std::span<const double> Grid::k_axis(int axis) const {
  if (axis < 0 || axis >= impl_->dim) throw InvalidArgument("grid: axis out of range");
  return impl_->k_axis[axis];
}

void Grid::fft_forward(std::span<const cplx> in, std::span<cplx> out) const {
  fftw_execute_dft(impl_->forward, as_fftw(in.data()), as_fftw(out.data()));
}

void Grid::fft_backward(std::span<const cplx> in, std::span<cplx> out) const {
  fftw_execute_dft(impl_->backward, as_fftw(in.data()), as_fftw(out.data()));
}

bool operator==(const Grid& a, const Grid& b) noexcept {
  if (a.impl_ == b.impl_) return true;
  return a.dim() == b.dim() && a.n() == b.n() && a.half_width() == b.half_width();
}

Field::Field(Grid g, double fill) : grid(std::move(g)), values(grid.size(), fill) {}

Field::Field(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) throw InvalidArgument("field: sample count does not match grid");
}

SpectralField::SpectralField(Grid g) : grid(std::move(g)), coefficients(grid.size()) {}

void require_finite(const Field& f, const char* what) {
  if (!kernels::active::all_finite(f.span())) throw NonFiniteError(std::string(what) + " contains NaN or Inf");
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatch("operands live on different grids");
}

Field sample(const Grid& grid, const std::function<double(std::span<const double>)>& fn) {
  Field f(grid);
  const int n = grid.n();
  if (grid.dim() == 1) {
    double x[1];
    for (int j = 0; j < n; ++j) {
      x[0] = grid.coordinate(j);
      f[j] = fn(x);
    }
  } else {
    double x[2];
    for (int i = 0; i < n; ++i) {
      x[0] = grid.coordinate(i);
      for (int j = 0; j < n; ++j) {
        x[1] = grid.coordinate(j);
        f[static_cast<std::size_t>(i) * n + j] = fn(x);
      }
    }
  }
  return f;
}

SpectralField to_spectral(const Field& f) {
  require_finite(f);
  SpectralField s(f.grid);
  kernels::active::to_complex(f.span(), s.coefficients);
  f.grid.fft_forward(s.coefficients, s.coefficients);
  const double inv = 1.0 / static_cast<double>(f.size());
  for (auto& c : s.coefficients) c *= inv;
  return s;
}

Field to_physical(const SpectralField& s) {
  std::vector<cplx> buf(s.coefficients);
  s.grid.fft_backward(buf, buf);
  Field f(s.grid);
  kernels::active::real_part(buf, 1.0, f.span());
  return f;
}

double hermitian_defect(const SpectralField& s) {
  const int n = s.grid.n();
  const auto& c = s.coefficients;
  double scale = 0.0;
  for (const auto& z : c) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  auto mirror = [n](int j) { return (n - j) % n; };
  if (s.grid.dim() == 1) {
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(c[j] - std::conj(c[mirror(j)])));
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto p = static_cast<std::size_t>(i) * n + j;
        const auto q = static_cast<std::size_t>(mirror(i)) * n + mirror(j);
        worst = std::max(worst, std::abs(c[p] - std::conj(c[q])));
      }
  }
  return worst / scale;
}

VectorField gradient(const Field& f) {
  const SpectralField s = to_spectral(f);
  VectorField out;
  out.reserve(f.grid.dim());
  std::vector<cplx> buf(f.size());
  for (int a = 0; a < f.grid.dim(); ++a) {
    kernels::active::imul_into(s.coefficients, f.grid.k_axis(a), buf);
    f.grid.fft_backward(buf, buf);
    Field d(f.grid);
    kernels::active::real_part(buf, 1.0, d.span());
    out.push_back(std::move(d));
  }
  return out;
}

Field divergence(std::span<const Field> w) {
  if (w.empty()) throw InvalidArgument("divergence: empty vector field");
  const Grid& g = w.front().grid;
  if (static_cast<int>(w.size()) != g.dim()) throw InvalidArgument("divergence: component count must equal dim");
  for (const auto& c : w) require_same_grid(g, c.grid);
  std::vector<cplx> acc(g.size(), cplx{});
  for (int a = 0; a < g.dim(); ++a) {
    const SpectralField s = to_spectral(w[a]);
    kernels::active::imul_accumulate(s.coefficients, g.k_axis(a), acc);
  }
  g.fft_backward(acc, acc);
  Field out(g);
  kernels::active::real_part(acc, 1.0, out.span());
  return out;
}

Field laplacian(const Field& f) {
  SpectralField s = to_spectral(f);
  const auto k2 = f.grid.k_squared();
  for (std::size_t i = 0; i < s.coefficients.size(); ++i) s.coefficients[i] *= -k2[i];
  return to_physical(s);
}

}  // namespace ks
