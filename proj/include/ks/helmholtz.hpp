#pragma once

// v = (I - Delta)^{-1} u, the chemoattractant slaved to the density through
// 0 = Delta v - v + u. Fourier multiplier 1/(1 + |k|^2).

#include "ks/grid.hpp"

namespace ks::helmholtz {

Field solve(const Field& u);

/// grad v with v = solve(u), in one pass via i k / (1 + |k|^2).
VectorField grad_potential(const Field& u);

/// sup |Delta v - v + u| using the grid's spectral Laplacian.
double residual(const Field& u, const Field& v);

}  // namespace ks::helmholtz
