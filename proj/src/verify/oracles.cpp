#include "ks/verify/oracles.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace ks::oracle {

namespace {

constexpr double kNodes[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
constexpr double kWeights[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

double wrap(double y, double half_width) {
  if (half_width <= 0.0) return y;
  const double period = 2.0 * half_width;
  double r = std::fmod(y + half_width, period);
  if (r < 0.0) r += period;
  return r - half_width;
}

}  // namespace

double gauss_legendre(const ScalarFn& fn, double lo, double hi, double panel) {
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / panel)));
  const double w = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * w;
    const double half = 0.5 * w;
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
      s += kWeights[i] * (fn(mid - half * kNodes[i]) + fn(mid + half * kNodes[i]));
    }
    total += half * s;
  }
  return total;
}

double bessel_potential_1d(const ScalarFn& u, double x, double reach) {
  auto integrand = [&](double y) { return 0.5 * std::exp(-std::abs(x - y)) * u(y); };
  return gauss_legendre(integrand, x - reach, x, 0.125) + gauss_legendre(integrand, x, x + reach, 0.125);
}

double heat_semigroup_1d(const ScalarFn& f, double x, double t, double half_width) {
  const double s = std::sqrt(t);
  const double reach = 13.0 * s;  // exp(-reach^2 / 4t) ~ 5e-19
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
  auto integrand = [&](double y) {
    const double d = x - y;
    return norm * std::exp(-d * d / (4.0 * t)) * f(wrap(y, half_width));
  };
  return std::exp(-t) * gauss_legendre(integrand, x - reach, x + reach, s / 4.0);
}

Field fisher_kpp_ifrk4(const Field& u0, double a, double b, double t_end, double dt) {
  const Grid& g = u0.grid;
  const std::size_t m = g.size();
  const auto k2 = g.k_squared();
  const int steps = static_cast<int>(std::llround(t_end / dt));
  std::vector<double> half(m), full(m);
  for (std::size_t i = 0; i < m; ++i) {
    half[i] = std::exp(-k2[i] * dt / 2.0);
    full[i] = std::exp(-k2[i] * dt);
  }
  std::vector<cplx> tmp(m);
  auto reaction_hat = [&](const std::vector<cplx>& uh, std::vector<cplx>& out) {
    for (std::size_t i = 0; i < m; ++i) tmp[i] = uh[i];
    g.fft_backward(tmp, tmp);
    for (std::size_t i = 0; i < m; ++i) {
      const double u = tmp[i].real() / static_cast<double>(m);
      tmp[i] = cplx(a * u - b * u * u, 0.0);
    }
    g.fft_forward(tmp, out);
  };

  std::vector<cplx> uh(m), k1(m), k2v(m), k3(m), k4(m), stage(m);
  for (std::size_t i = 0; i < m; ++i) uh[i] = cplx(u0[i], 0.0);
  g.fft_forward(uh, uh);
  for (int s = 0; s < steps; ++s) {
    reaction_hat(uh, k1);
    for (std::size_t i = 0; i < m; ++i) stage[i] = half[i] * (uh[i] + 0.5 * dt * k1[i]);
    reaction_hat(stage, k2v);
    for (std::size_t i = 0; i < m; ++i) stage[i] = half[i] * uh[i] + 0.5 * dt * k2v[i];
    reaction_hat(stage, k3);
    for (std::size_t i = 0; i < m; ++i) stage[i] = full[i] * uh[i] + dt * half[i] * k3[i];
    reaction_hat(stage, k4);
    for (std::size_t i = 0; i < m; ++i)
      uh[i] = full[i] * uh[i] + dt / 6.0 * (full[i] * k1[i] + 2.0 * half[i] * (k2v[i] + k3[i]) + k4[i]);
  }
  g.fft_backward(uh, uh);
  Field out(g);
  for (std::size_t i = 0; i < m; ++i) out[i] = uh[i].real() / static_cast<double>(m);
  return out;
}

double logistic_rk4(double u0, double a, double b, double t_end, int steps) {
  const double h = t_end / steps;
  auto f = [&](double u) { return u * (a - b * u); };
  double u = u0;
  for (int s = 0; s < steps; ++s) {
    const double k1 = f(u);
    const double k2 = f(u + 0.5 * h * k1);
    const double k3 = f(u + 0.5 * h * k2);
    const double k4 = f(u + h * k3);
    u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

}  // namespace ks::oracle
