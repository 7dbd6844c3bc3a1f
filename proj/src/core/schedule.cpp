#include "schedule.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace bseg {
namespace {

// Triangular rate profile.
double rate(double t, double beta_max, double beta_min) {
  return beta_min + (beta_max - beta_min) * (1.0 - std::abs(2.0 * t - 1.0));
}

// Integral of the rising half, valid for 0 <= u <= 0.5.
double rising_integral(double u, double beta_max, double beta_min) {
  return beta_min * u + (beta_max - beta_min) * u * u;
}

}  // namespace

NoiseSchedule::NoiseSchedule(int n_steps, double beta_max, double beta_min)
    : n_steps_(n_steps), beta_max_(beta_max), beta_min_(beta_min) {
  if (n_steps < 1) {
    throw ConfigError("schedule.n_steps", "must be >= 1, got " + std::to_string(n_steps));
  }
  if (!std::isfinite(beta_max) || beta_max <= 0.0) {
    throw ConfigError("schedule.beta_max", "must be finite and > 0");
  }
  if (!std::isfinite(beta_min) || beta_min < 0.0) {
    throw ConfigError("schedule.beta_min", "must be finite and >= 0");
  }
  if (beta_min > beta_max) {
    throw ConfigError("schedule.beta_min", "must not exceed schedule.beta_max");
  }

  const int n = n_steps;
  total_ = 2.0 * rising_integral(0.5, beta_max, beta_min);
  t_grid_.resize(n + 1);
  sigma2_fwd_.resize(n + 1);
  sigma2_bwd_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    t_grid_[i] = static_cast<double>(i) / n;
  }
  // Evaluate on the half that keeps the argument <= 0.5 so that the value at
  // i and the value at n - i come from the same closed form.
  for (int i = 0; i <= n; ++i) {
    if (2 * i <= n) {
      sigma2_fwd_[i] = rising_integral(t_grid_[i], beta_max, beta_min);
    } else {
      sigma2_fwd_[i] = total_ - rising_integral(t_grid_[n - i], beta_max, beta_min);
    }
  }
  for (int i = 0; i <= n; ++i) {
    sigma2_bwd_[i] = sigma2_fwd_[n - i];
  }
  sigma2_fwd_[0] = 0.0;
  sigma2_bwd_[n] = 0.0;

  beta_.resize(n);
  for (int i = 0; i < n; ++i) {
    beta_[i] = rate(0.5 * (t_grid_[i] + t_grid_[i + 1]), beta_max, beta_min);
  }
}

SigmaPair NoiseSchedule::variances_at(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("time " + std::to_string(t) + " outside [0, 1]");
  }
  const double pos = t * n_steps_;
  int i = static_cast<int>(std::floor(pos));
  if (i >= n_steps_) i = n_steps_ - 1;
  const double frac = pos - i;
  if (frac == 0.0) return {sigma2_fwd_[i], sigma2_bwd_[i]};
  if (frac == 1.0) return {sigma2_fwd_[i + 1], sigma2_bwd_[i + 1]};
  return {sigma2_fwd_[i] + frac * (sigma2_fwd_[i + 1] - sigma2_fwd_[i]),
          sigma2_bwd_[i] + frac * (sigma2_bwd_[i + 1] - sigma2_bwd_[i])};
}

SigmaPair NoiseSchedule::sigma_at(double t) const {
  const SigmaPair v = variances_at(t);
  return {std::sqrt(v.fwd), std::sqrt(v.bwd)};
}

NoiseSchedule build_schedule(int n_steps, double beta_max, double beta_min) {
  return NoiseSchedule(n_steps, beta_max, beta_min);
}

}  // namespace bseg
