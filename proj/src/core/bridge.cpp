#include "bridge.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace bseg {

void require_state(const ImageTensor& data, const char* what) {
  if (data.channels() != kStateChannels) {
    throw ShapeError(std::string(what) + ": expected 6 channels, got " +
                     std::to_string(data.channels()));
  }
}

Posterior posterior_params(const ImageTensor& x0, const ImageTensor& x1,
                           double t, const NoiseSchedule& schedule) {
  require_same_shape(x0, x1, "posterior_params endpoints");
  const SigmaPair v = schedule.variances_at(t);
  const double denom = v.fwd + v.bwd;
  const double w0 = v.bwd / denom;
  const double w1 = v.fwd / denom;

  Posterior post{ImageTensor(x0.height(), x0.width(), x0.channels()),
                 v.fwd * v.bwd / denom};
  auto a = x0.values();
  auto b = x1.values();
  auto out = post.mean.values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(w0 * a[i] + w1 * b[i]);
  }
  return post;
}

BridgeState sample_xt(const ImageTensor& x0, const ImageTensor& x1, double t,
                      const NoiseSchedule& schedule, Rng& rng) {
  Posterior post = posterior_params(x0, x1, t, schedule);
  if (post.variance > 0.0) {
    const double sd = std::sqrt(post.variance);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (float& v : post.mean.values()) {
      v = static_cast<float>(v + sd * normal(rng));
    }
  }
  return {std::move(post.mean), t};
}

ImageTensor training_target(const BridgeState& xt, const ImageTensor& x0,
                            const NoiseSchedule& schedule) {
  require_same_shape(xt.data, x0, "training_target");
  const double sigma = schedule.sigma_at(xt.t).fwd;
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::kDegenerateTime,
                "training_target: sigma_t is zero at t = " + std::to_string(xt.t));
  }
  ImageTensor out(x0.height(), x0.width(), x0.channels());
  auto a = xt.data.values();
  auto b = x0.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] = static_cast<float>((static_cast<double>(a[i]) - b[i]) / sigma);
  }
  return out;
}

ImageTensor predict_x0(const BridgeState& xt, const ImageTensor& eps,
                       const NoiseSchedule& schedule) {
  require_same_shape(xt.data, eps, "predict_x0");
  const double sigma = schedule.sigma_at(xt.t).fwd;
  ImageTensor out(eps.height(), eps.width(), eps.channels());
  auto a = xt.data.values();
  auto e = eps.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] = static_cast<float>(a[i] - sigma * e[i]);
  }
  return out;
}

BridgeState reverse_step(const BridgeState& xt, const ImageTensor& x0hat,
                         double s, const NoiseSchedule& schedule,
                         bool deterministic, Rng* rng) {
  require_same_shape(xt.data, x0hat, "reverse_step");
  if (!(s >= 0.0 && s < xt.t)) {
    throw DomainError("reverse_step requires 0 <= s < t (s = " +
                      std::to_string(s) + ", t = " + std::to_string(xt.t) + ")");
  }
  if (!deterministic && rng == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "reverse_step: stochastic step needs a random source");
  }
  const double a2 = schedule.variances_at(s).fwd;
  const double t2 = schedule.variances_at(xt.t).fwd;
  const double b2 = t2 - a2;
  if (a2 == 0.0) return {x0hat, s};

  const double w_anchor = b2 / t2;
  const double w_state = a2 / t2;
  BridgeState out{ImageTensor(x0hat.height(), x0hat.width(), x0hat.channels()), s};
  auto anchor = x0hat.values();
  auto state = xt.data.values();
  auto o = out.data.values();
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] = static_cast<float>(w_anchor * anchor[i] + w_state * state[i]);
  }
  if (!deterministic) {
    const double sd = std::sqrt(a2 * b2 / t2);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (float& v : o) v = static_cast<float>(v + sd * normal(*rng));
  }
  return out;
}

}  // namespace bseg
