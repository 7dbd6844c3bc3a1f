#pragma once

#include <vector>

namespace bseg {

struct SigmaPair {
  double fwd = 0.0;  // sigma_t
  double bwd = 0.0;  // sigma-bar_t
};

/// Discretized symmetric noise schedule on a uniform time grid over [0, 1].
///
/// The noise rate is triangular: it rises linearly from beta_min at t = 0 to
/// beta_max at t = 0.5 and falls back to beta_min at t = 1. The forward and
/// backward variance accumulators are the exact integrals of that profile,
/// so sigma2_fwd[i] + sigma2_bwd[i] equals the total variance to roundoff.
class NoiseSchedule {
 public:
  NoiseSchedule(int n_steps, double beta_max, double beta_min);

  int n_steps() const noexcept { return n_steps_; }
  double beta_max() const noexcept { return beta_max_; }
  double beta_min() const noexcept { return beta_min_; }

  const std::vector<double>& t_grid() const noexcept { return t_grid_; }
  /// Rate sampled at the midpoint of each grid interval (n_steps values).
  const std::vector<double>& beta() const noexcept { return beta_; }
  const std::vector<double>& sigma2_fwd() const noexcept { return sigma2_fwd_; }
  const std::vector<double>& sigma2_bwd() const noexcept { return sigma2_bwd_; }
  double total_variance() const noexcept { return total_; }

  /// Interpolated (sigma_t^2, sigma-bar_t^2); exact at grid points.
  SigmaPair variances_at(double t) const;
  /// Square roots of variances_at(t).
  SigmaPair sigma_at(double t) const;

 private:
  int n_steps_;
  double beta_max_;
  double beta_min_;
  double total_ = 0.0;
  std::vector<double> t_grid_;
  std::vector<double> beta_;
  std::vector<double> sigma2_fwd_;
  std::vector<double> sigma2_bwd_;
};

NoiseSchedule build_schedule(int n_steps, double beta_max, double beta_min);

/// Default beta_min used when a configuration does not override it.
inline constexpr double kDefaultBetaMin = 1e-4;

}  // namespace bseg
