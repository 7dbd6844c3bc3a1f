#pragma once

#include <random>

#include "schedule.hpp"
#include "tensor.hpp"

namespace bseg {

using Rng = std::mt19937_64;

/// A 6-channel bridge state tagged with its time.
struct BridgeState {
  ImageTensor data;
  double t = 0.0;
};

inline constexpr int kStateChannels = 6;

/// Throws ShapeError unless the state has exactly six channels.
void require_state(const ImageTensor& data, const char* what);

struct Posterior {
  ImageTensor mean;
  double variance = 0.0;  // isotropic
};

/// Gaussian posterior of the intermediate state given both endpoints.
Posterior posterior_params(const ImageTensor& x0, const ImageTensor& x1,
                           double t, const NoiseSchedule& schedule);

/// Draws X_t from the posterior; at t = 0 and t = 1 the draw is the endpoint.
BridgeState sample_xt(const ImageTensor& x0, const ImageTensor& x1, double t,
                      const NoiseSchedule& schedule, Rng& rng);

/// Regression target (X_t - X_0) / sigma_t.
ImageTensor training_target(const BridgeState& xt, const ImageTensor& x0,
                            const NoiseSchedule& schedule);

/// Inverse of training_target: X_t - sigma_t * eps.
ImageTensor predict_x0(const BridgeState& xt, const ImageTensor& eps,
                       const NoiseSchedule& schedule);

/// One reverse step from time xt.t down to s.
///
/// The interval [0, t] is treated as a sub-bridge anchored at x0hat (time 0)
/// and xt (time t); the returned state is its posterior at time s. Noise is
/// added only when `deterministic` is false, in which case `rng` must be set.
BridgeState reverse_step(const BridgeState& xt, const ImageTensor& x0hat,
                         double s, const NoiseSchedule& schedule,
                         bool deterministic, Rng* rng = nullptr);

}  // namespace bseg
