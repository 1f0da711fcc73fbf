#include "ks/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ks/error.hpp"
#include "ks/helmholtz.hpp"
#include "ks/kernels.hpp"

namespace ks {

namespace k = kernels::active;

State make_state(Field u, double t) {
  require_finite(u, "initial density");
  Field v = helmholtz::solve(u);
  return State{t, std::move(u), std::move(v), 0};
}

StepControl resolve_defaults(StepControl c, double u0_sup, const Params& p) {
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw InvalidArgument("dt must be > 0");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) throw InvalidArgument("t_end must be >= 0");
  if (!(c.negativity_budget > 0.0)) c.negativity_budget = 1e-10 * (1.0 + u0_sup);
  if (!(c.blowup_threshold > 0.0)) c.blowup_threshold = 1e4 * std::max({1.0, u0_sup, p.a / p.b});
  return c;
}

double phi1(double z) {
  if (std::abs(z) < 0.5) {
    // sum z^j / (j+1)!
    double term = 1.0, sum = 1.0;
    for (int j = 1; j < 20; ++j) {
      term *= z / (j + 1);
      sum += term;
    }
    return sum;
  }
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 0.5) {
    // sum z^j / (j+2)!
    double term = 0.5, sum = 0.5;
    for (int j = 1; j < 20; ++j) {
      term *= z / (j + 2);
      sum += term;
    }
    return sum;
  }
  return (std::expm1(z) - z) / (z * z);
}

double stable_dt(const Grid& grid, const Params& p, double u_sup) {
  constexpr double eps = 1e-12;
  const double advect = 0.25 * grid.spacing() / (p.chi * std::sqrt(double(grid.dim())) * u_sup + eps);
  const double react = 0.5 / (p.a + 2.0 * p.b * u_sup + eps);
  return std::min(advect, react);
}

Stepper::Stepper(Grid grid, Params p, StepControl control)
    : grid_(std::move(grid)), params_(p), control_(control) {
  validate(params_);
  if (params_.dim != grid_.dim()) throw InvalidArgument("params.dim does not match grid dimension");
  if (!(control_.dt > 0.0)) throw InvalidArgument("dt must be > 0");
  const auto k2 = grid_.k_squared();
  const std::size_t m = grid_.size();
  lin_.resize(m);
  phi1dt_.resize(m);
  phi2dt_.resize(m);
  resolvent_.resize(m);
  const double dt = control_.dt;
  for (std::size_t i = 0; i < m; ++i) {
    const double z = -dt * (1.0 + k2[i]);
    lin_[i] = std::exp(z);
    phi1dt_[i] = dt * phi1(z);
    phi2dt_[i] = dt * phi2(z);
    resolvent_[i] = 1.0 / (1.0 + k2[i]);
  }
  u_hat_.resize(m);
  f0_.resize(m);
  pred_.resize(m);
  fpred_.resize(m);
  work_.resize(m);
  acc_.resize(m);
  tmp_.resize(m);
  u_phys_.resize(m);
  grad_.resize(m);
  flux_.resize(m);
}

void Stepper::spectral_nonlinearity(std::span<const cplx> u_hat, std::span<cplx> f_hat) {
  const std::size_t m = grid_.size();
  const double inv = 1.0 / static_cast<double>(m);
  const bool dealias = control_.dealias;
  const auto mask = grid_.dealias_mask();

  // Filtered density in physical space.
  if (dealias)
    k::scale_into(u_hat, mask, work_);
  else
    std::copy(u_hat.begin(), u_hat.end(), work_.begin());
  std::copy(work_.begin(), work_.end(), acc_.begin());  // acc_ keeps the filtered u-hat
  grid_.fft_backward(work_, work_);
  k::real_part(work_, 1.0, u_phys_);

  // Logistic part, transformed.
  k::reaction(u_phys_, params_.a + 1.0, params_.b, flux_);
  k::to_complex(flux_, f_hat);
  grid_.fft_forward(f_hat, f_hat);

  if (params_.chi != 0.0) {
    // div(u grad v): per axis, d_a v from the filtered u-hat, product in
    // physical space, back to spectral and accumulate i k_a (u d_a v)-hat.
    std::vector<cplx>& div = work_;
    std::vector<cplx>& tmp = tmp_;
    std::fill(div.begin(), div.end(), cplx{});
    for (int a = 0; a < grid_.dim(); ++a) {
      k::scale_into(acc_, resolvent_, tmp);
      k::imul_into(tmp, grid_.k_axis(a), tmp);
      grid_.fft_backward(tmp, tmp);
      k::real_part(tmp, 1.0, grad_);
      k::product(u_phys_, grad_, flux_);
      k::to_complex(flux_, tmp);
      grid_.fft_forward(tmp, tmp);
      k::imul_accumulate(tmp, grid_.k_axis(a), div);
    }
    k::combine(inv, f_hat, -params_.chi * inv, div, f_hat);
  } else {
    for (auto& c : f_hat) c *= inv;
  }
  if (dealias) k::scale(f_hat, mask);
}

void Stepper::advance(State& s) {
  if (!(control_.negativity_budget > 0.0) || !(control_.blowup_threshold > 0.0))
    control_ = resolve_defaults(control_, k::max_abs(s.u.span()), params_);
  const std::size_t m = grid_.size();
  const double inv = 1.0 / static_cast<double>(m);

  k::to_complex(s.u.span(), u_hat_);
  grid_.fft_forward(u_hat_, u_hat_);
  for (auto& c : u_hat_) c *= inv;

  spectral_nonlinearity(u_hat_, f0_);
  k::etd_predict(u_hat_, lin_, phi1dt_, f0_, pred_);
  spectral_nonlinearity(pred_, fpred_);
  k::etd_correct(pred_, phi2dt_, fpred_, f0_, u_hat_);

  std::copy(u_hat_.begin(), u_hat_.end(), work_.begin());
  grid_.fft_backward(work_, work_);
  k::real_part(work_, 1.0, s.u.span());
  k::scale_into(u_hat_, resolvent_, work_);
  grid_.fft_backward(work_, work_);
  k::real_part(work_, 1.0, s.v.span());

  s.t += control_.dt;
  ++s.step_count;

  if (!k::all_finite(s.u.span())) throw NonFiniteState("density became non-finite", s.t);
  const double hi = k::max_value(s.u.span());
  if (hi > control_.blowup_threshold) {
    std::ostringstream msg;
    msg << "sup norm " << hi << " exceeded blow-up threshold " << control_.blowup_threshold;
    throw BlowupDetected(msg.str(), s.t);
  }
  const double lo = k::min_value(s.u.span());
  if (lo < -control_.negativity_budget) {
    std::ostringstream msg;
    msg << "min u = " << lo << " below negativity budget -" << control_.negativity_budget;
    throw NegativityViolation(msg.str(), s.t);
  }
}

Field nonlinearity(const Field& u, const Params& p, bool dealias) {
  require_finite(u, "density");
  StepControl c;
  c.dealias = dealias;
  Stepper stepper(u.grid, p, c);
  SpectralField s = to_spectral(u);
  SpectralField f(u.grid);
  stepper.spectral_nonlinearity(s.coefficients, f.coefficients);
  return to_physical(f);
}

State step(const State& s, const Params& p, const StepControl& c) {
  require_finite(s.u, "density");
  Stepper stepper(s.u.grid, p, c);
  State next = s;
  stepper.advance(next);
  return next;
}

}  // namespace ks
