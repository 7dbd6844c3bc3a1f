#pragma once

#include <cstdint>
#include <vector>

#include "denoiser.hpp"

namespace bseg {

struct AdamHyper {
  double lr = 5e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First and second moment buffers; they persist across steps.
struct AdamState {
  std::vector<float> m;
  std::vector<float> v;
  std::int64_t step = 0;  // number of completed updates
};

/// Bias-corrected Adam update of params.values from params.grads.
/// `step_index` is 1-based; non-finite gradients raise NumericError.
void adam_step(DenoiserParams& params, AdamState& state, const AdamHyper& hyper,
               std::int64_t step_index);

/// ema <- decay * ema + (1 - decay) * values.
void ema_update(DenoiserParams& params);

}  // namespace bseg
