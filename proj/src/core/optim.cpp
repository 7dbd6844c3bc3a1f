#include "optim.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace bseg {

void adam_step(DenoiserParams& params, AdamState& state, const AdamHyper& hyper,
               std::int64_t step_index) {
  const std::size_t n = params.values.size();
  if (params.grads.size() != n) throw ShapeError("adam_step: gradient buffer length mismatch");
  if (step_index < 1) {
    throw Error(ErrorCode::kInvalidArgument, "adam_step: step_index must be >= 1");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(params.grads[i])) {
      throw NumericError("adam_step: non-finite gradient at index " + std::to_string(i));
    }
  }
  state.m.resize(n, 0.0f);
  state.v.resize(n, 0.0f);

  const double b1 = hyper.beta1, b2 = hyper.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_index));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_index));
  for (std::size_t i = 0; i < n; ++i) {
    const double g = params.grads[i];
    const double m = b1 * state.m[i] + (1.0 - b1) * g;
    const double v = b2 * state.v[i] + (1.0 - b2) * g * g;
    state.m[i] = static_cast<float>(m);
    state.v[i] = static_cast<float>(v);
    const double update = hyper.lr * (m / c1) / (std::sqrt(v / c2) + hyper.eps);
    params.values[i] = static_cast<float>(params.values[i] - update);
  }
  state.step = step_index;
}

void ema_update(DenoiserParams& params) {
  const double d = params.ema_decay;
  if (params.ema_values.size() != params.values.size()) {
    params.ema_values = params.values;
    return;
  }
  for (std::size_t i = 0; i < params.values.size(); ++i) {
    params.ema_values[i] =
        static_cast<float>(d * params.ema_values[i] + (1.0 - d) * params.values[i]);
  }
}

}  // namespace bseg
