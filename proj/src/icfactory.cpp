#include "ks/icfactory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ks/error.hpp"
#include "ks/kernels.hpp"

namespace ks::ic {

namespace {

// exp(-x^2/2) < 1e-16 beyond this many widths.
const double kGaussianCutoff = std::sqrt(2.0 * std::log(1e16));

double transition_weight(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Field band_limited_noise(const ICSpec& spec, const Grid& grid) {
  std::mt19937_64 rng(spec.seed);
  const double cutoff2 = 1.0 / (spec.width * spec.width);
  const auto k2 = grid.k_squared();
  std::vector<cplx> c(grid.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double re = standard_normal(rng);
    const double im = standard_normal(rng);
    if (i != 0 && k2[i] <= cutoff2) c[i] = cplx(re, im);
  }
  grid.fft_backward(c, c);
  Field g(grid);
  kernels::serial::real_part(c, 1.0, g.span());
  const double lo = kernels::serial::min_value(g.span());
  const double hi = kernels::serial::max_value(g.span());
  if (!(hi > lo)) throw InvalidArgument("ic: positive_random width leaves no resolved modes");
  for (auto& x : g.values) x = (x - lo) / (hi - lo);
  return g;
}

}  // namespace

const char* to_string(Kind k) noexcept {
  switch (k) {
    case Kind::constant: return "constant";
    case Kind::gaussian: return "gaussian";
    case Kind::smoothed_indicator: return "smoothed_indicator";
    case Kind::positive_random: return "positive_random";
    case Kind::constant_plus_bump: return "constant_plus_bump";
  }
  return "?";
}

Kind kind_from_string(const std::string& name) {
  for (Kind k : {Kind::constant, Kind::gaussian, Kind::smoothed_indicator, Kind::positive_random,
                 Kind::constant_plus_bump})
    if (name == to_string(k)) return k;
  throw InvalidArgument("ic: unknown kind '" + name + "'");
}

double smooth_step(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  const double on = transition_weight(1.0 - s);
  return on / (on + transition_weight(s));
}

void validate(const ICSpec& spec) {
  if (!(spec.amplitude >= 0.0) || !std::isfinite(spec.amplitude)) throw InvalidArgument("ic: amplitude must be >= 0");
  if (!(spec.floor >= 0.0) || !std::isfinite(spec.floor)) throw InvalidArgument("ic: floor must be >= 0");
  if (!(spec.width > 0.0)) throw InvalidArgument("ic: width must be > 0");
  if (!(spec.radius >= 0.0)) throw InvalidArgument("ic: radius must be >= 0");
  const bool floored = spec.kind == Kind::positive_random || spec.kind == Kind::constant_plus_bump;
  if (!floored && spec.floor != 0.0)
    throw InvalidArgument(std::string("ic: floor is not used by kind ") + to_string(spec.kind));
}

double support_radius(const ICSpec& spec) {
  switch (spec.kind) {
    case Kind::gaussian:
    case Kind::constant_plus_bump: return kGaussianCutoff * spec.width;
    case Kind::smoothed_indicator: return spec.radius + 3.0 * spec.width;
    default: return 0.0;
  }
}

Field realize(const ICSpec& spec, const Grid& grid, double guard) {
  validate(spec);
  const int dim = grid.dim();
  std::vector<double> center = spec.center;
  if (center.empty()) center.assign(dim, 0.0);
  if (static_cast<int>(center.size()) != dim) throw InvalidArgument("ic: center has wrong dimension");

  const double reach = support_radius(spec);
  if (reach > 0.0) {
    const double limit = (1.0 - guard) * grid.half_width();
    for (double c : center)
      if (std::abs(c) + reach > limit)
        throw InvalidArgument("ic: initial profile extends into the boundary guard zone");
  }

  auto dist2 = [&](std::span<const double> x) {
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
    return r2;
  };
  const double two_w2 = 2.0 * spec.width * spec.width;

  switch (spec.kind) {
    case Kind::constant: return Field(grid, spec.amplitude);
    case Kind::gaussian:
      return sample(grid, [&](std::span<const double> x) { return spec.amplitude * std::exp(-dist2(x) / two_w2); });
    case Kind::constant_plus_bump:
      return sample(grid, [&](std::span<const double> x) {
        return spec.floor + spec.amplitude * std::exp(-dist2(x) / two_w2);
      });
    case Kind::smoothed_indicator:
      return sample(grid, [&](std::span<const double> x) {
        const double r = std::sqrt(dist2(x));
        return spec.amplitude * smooth_step((r - spec.radius) / (3.0 * spec.width));
      });
    case Kind::positive_random: {
      Field w = band_limited_noise(spec, grid);
      for (auto& x : w.values) x = spec.floor + spec.amplitude * x;
      return w;
    }
  }
  throw InvalidArgument("ic: unhandled kind");
}

}  // namespace ks::ic
