#pragma once

// The semigroup T(t) = e^{-t} (G(., t) * .) generated by Delta - 1, realized
// as the Fourier multiplier exp(-t (1 + |k|^2)).

#include <span>

#include "ks/grid.hpp"

namespace ks::semigroup {

/// Gaussian heat kernel (4 pi t)^{-dim/2} exp(-|x|^2 / 4t). Throws for t <= 0.
double heat_kernel(std::span<const double> x, double t, int dim);

/// T(t) f. t = 0 returns f unchanged; t < 0 throws.
Field apply_T(double t, const Field& f);

/// T(t) (div w), evaluated as a single multiplier i k exp(-t (1 + |k|^2)).
Field apply_T_div(double t, std::span<const Field> w);

}  // namespace ks::semigroup
