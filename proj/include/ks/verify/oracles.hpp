#pragma once

// Reference computations that share no code path with the solver: direct
// quadrature of the integral operators and an independently written
// integrating-factor RK4 stepper for the chemotaxis-free equation.

#include <functional>

#include "ks/grid.hpp"

namespace ks::oracle {

using ScalarFn = std::function<double(double)>;

/// Composite 8-point Gauss-Legendre quadrature of fn over [lo, hi] with
/// panels no wider than `panel`.
double gauss_legendre(const ScalarFn& fn, double lo, double hi, double panel = 0.25);

/// ((I - d^2/dx^2)^{-1} u)(x) on the whole line: integral of
/// exp(-|x-y|)/2 u(y) dy, split at the cusp, truncated at |x-y| = reach.
double bessel_potential_1d(const ScalarFn& u, double x, double reach = 45.0);

/// (T(t) f)(x) = e^{-t} integral of G(x-y, t) f(y) dy on the line, with f
/// extended 2L-periodically when half_width > 0.
double heat_semigroup_1d(const ScalarFn& f, double x, double t, double half_width = 0.0);

/// u_t = u_xx + u (a - b u) advanced with Lawson integrating-factor RK4
/// (linear part -k^2 exact, reaction by RK4), no dealiasing.
Field fisher_kpp_ifrk4(const Field& u0, double a, double b, double t_end, double dt);

/// Classical RK4 for u' = u (a - b u).
double logistic_rk4(double u0, double a, double b, double t_end, int steps);

}  // namespace ks::oracle
