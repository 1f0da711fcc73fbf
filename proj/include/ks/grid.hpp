#pragma once

// Periodic box [-L, L)^dim sampled on n points per axis, plus the spectral
// transform layer built on top of it. Forward transforms divide by n^dim so
// the k = 0 coefficient is the field mean.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace ks {

using cplx = std::complex<double>;

class Grid {
 public:
  int dim() const noexcept;
  int n() const noexcept;
  double half_width() const noexcept;
  double spacing() const noexcept;
  /// Number of grid points, n^dim.
  std::size_t size() const noexcept;
  /// Quadrature weight h^dim.
  double cell_volume() const noexcept;
  double nyquist() const noexcept;

  /// Per-axis wavenumbers pi*j/L in FFT order; entry n/2 holds -nyquist().
  std::span<const double> wavenumbers() const noexcept;
  /// Physical coordinate of index j along any axis: -L + j*h.
  double coordinate(int j) const noexcept;

  // Flattened per-point tables (row-major, axis 0 slowest).
  std::span<const double> k_squared() const noexcept;
  /// Derivative multiplier along `axis`; the Nyquist entries are zero.
  std::span<const double> k_axis(int axis) const;
  /// 1 on modes kept by the 2/3 rule, 0 elsewhere.
  std::span<const double> dealias_mask() const noexcept;
  /// Euclidean distance |x| of each grid point from the origin.
  std::span<const double> radius() const noexcept;
  /// max_i |x_i| of each grid point (distance to the box in the sup norm).
  std::span<const double> sup_radius() const noexcept;

  /// Unnormalized complex DFTs over the whole grid; in may alias out.
  void fft_forward(std::span<const cplx> in, std::span<cplx> out) const;
  void fft_backward(std::span<const cplx> in, std::span<cplx> out) const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept;

 private:
  struct Impl;
  explicit Grid(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend Grid make_grid(int dim, int n, double half_width);
};

/// Throws InvalidArgument unless dim is 1 or 2, n is a power of two >= 8,
/// and half_width > 0.
Grid make_grid(int dim, int n, double half_width);

struct Field {
  Grid grid;
  std::vector<double> values;

  explicit Field(Grid g, double fill = 0.0);
  Field(Grid g, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> span() const noexcept { return values; }
  std::span<double> span() noexcept { return values; }
};

struct SpectralField {
  Grid grid;
  std::vector<cplx> coefficients;

  explicit SpectralField(Grid g);
};

using VectorField = std::vector<Field>;

/// Throws NonFiniteError if any sample is NaN or Inf.
void require_finite(const Field& f, const char* what = "field");
void require_same_grid(const Grid& a, const Grid& b);

/// Samples fn at every grid point; fn receives the coordinates of the point.
Field sample(const Grid& grid, const std::function<double(std::span<const double>)>& fn);

SpectralField to_spectral(const Field& f);
Field to_physical(const SpectralField& s);

/// Largest |c(k) - conj(c(-k))| relative to the largest coefficient.
double hermitian_defect(const SpectralField& s);

VectorField gradient(const Field& f);
Field divergence(std::span<const Field> w);
Field laplacian(const Field& f);

}  // namespace ks
