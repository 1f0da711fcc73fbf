#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ks/grid.hpp"

namespace ks::ic {

enum class Kind { constant, gaussian, smoothed_indicator, positive_random, constant_plus_bump };

const char* to_string(Kind k) noexcept;
/// Throws InvalidArgument on an unknown name.
Kind kind_from_string(const std::string& name);

/// Initial-condition description.
///
///  constant            u = amplitude
///  gaussian            u = amplitude exp(-|x-c|^2 / (2 width^2))
///  smoothed_indicator  u = amplitude on |x-c| <= radius, C-infinity roll-off
///                      over (radius, radius + 3 width), exactly 0 beyond
///  positive_random     u = floor + amplitude * w, w in [0,1] band-limited to
///                      |k| <= 1/width, drawn from `seed`
///  constant_plus_bump  u = floor + amplitude exp(-|x-c|^2 / (2 width^2))
struct ICSpec {
  Kind kind = Kind::constant;
  double amplitude = 1.0;
  std::vector<double> center;  ///< empty means the origin
  double radius = 0.0;
  double width = 1.0;
  double floor = 0.0;
  std::uint64_t seed = 0;
};

void validate(const ICSpec& spec);

/// Distance from the center beyond which the non-constant part is below
/// double precision (or identically zero). Zero for kinds without a bump.
double support_radius(const ICSpec& spec);

/// Deterministic sampling of `spec` on `grid`. Throws InvalidArgument when a
/// localized profile reaches into the outer `guard` fraction of the box.
Field realize(const ICSpec& spec, const Grid& grid, double guard = 0.1);

/// The C-infinity step used by smoothed_indicator: 1 at s <= 0, 0 at s >= 1.
double smooth_step(double s);

}  // namespace ks::ic
