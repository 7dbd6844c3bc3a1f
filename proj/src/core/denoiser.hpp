#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bridge.hpp"
#include "schedule.hpp"
#include "tensor.hpp"

namespace bseg {

/// Predicts eps for a bridge state at time t. Output shape equals the input
/// state's shape; implementations must be deterministic.
class Denoiser {
 public:
  virtual ~Denoiser() = default;
  virtual ImageTensor predict(const BridgeState& state, double t) const = 0;
};

/// Returns the exact regression target (X_t - X_0) / sigma_t for a known X_0.
class OracleDenoiser final : public Denoiser {
 public:
  OracleDenoiser(ImageTensor x0, const NoiseSchedule& schedule)
      : x0_(std::move(x0)), schedule_(&schedule) {}
  ImageTensor predict(const BridgeState& state, double t) const override;

 private:
  ImageTensor x0_;
  const NoiseSchedule* schedule_;
};

struct LayerShape {
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 3;

  std::size_t weight_count() const {
    return std::size_t(in_channels) * out_channels * kernel * kernel;
  }
  std::size_t param_count() const { return weight_count() + out_channels; }
  bool operator==(const LayerShape&) const = default;
};

/// Input: 6 state channels plus one channel broadcasting t.
inline constexpr int kDenoiserInputChannels = kStateChannels + 1;

/// `depth` hidden 3x3 conv layers of `width` channels, then a 3x3 linear head.
std::vector<LayerShape> reference_layers(int width, int depth);

std::size_t total_param_count(const std::vector<LayerShape>& layers);

/// Parameter vector plus gradient and EMA buffers of the same length.
///
/// Layout per layer: weights [out][in][ky][kx] followed by biases [out].
struct DenoiserParams {
  std::vector<LayerShape> layers;
  std::vector<float> values;
  std::vector<float> grads;
  std::vector<float> ema_values;
  double ema_decay = 0.999;

  static DenoiserParams zeros(std::vector<LayerShape> layers, double ema_decay = 0.999);
  std::size_t size() const { return values.size(); }
};

/// Weights uniform in +-sqrt(6 / fan_in) (+-sqrt(3 / fan_in) for the head),
/// biases zero; EMA starts at the initial values.
DenoiserParams init_params(std::vector<LayerShape> layers, Rng& rng,
                           double ema_decay = 0.999);

/// Which parameter set a ReferenceDenoiser evaluates.
enum class ParamSet { kRaw, kEma };

class ReferenceDenoiser final : public Denoiser {
 public:
  ReferenceDenoiser(const DenoiserParams& params, ParamSet set)
      : params_(&params), set_(set) {}
  ImageTensor predict(const BridgeState& state, double t) const override;

 private:
  const DenoiserParams* params_;
  ParamSet set_;
};

/// Forward pass of the reference network using params.values.
ImageTensor reference_denoiser_forward(const DenoiserParams& params,
                                       const BridgeState& state, double t);

/// A noisy state and its regression target.
struct TrainingPair {
  BridgeState xt;
  ImageTensor target;
};

/// Mean squared error over batch, pixels and channels; gradients of that
/// mean are written into params.grads.
double loss_and_grad(DenoiserParams& params, std::span<const TrainingPair> batch);

/// Double-precision evaluation of the same network, for gradient checking.
/// `grads` may be empty to skip the backward pass.
double loss_and_grad_f64(const std::vector<LayerShape>& layers,
                         std::span<const double> params,
                         std::span<const TrainingPair> batch,
                         std::span<double> grads);

}  // namespace bseg
