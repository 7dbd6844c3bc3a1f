#include "inference.hpp"

#include <cmath>
#include <string>

#include "bridge.hpp"
#include "error.hpp"
#include "instances.hpp"

namespace bseg {

ReverseResult run_reverse(const BridgeState& x1, const Denoiser& denoiser,
                          const NoiseSchedule& schedule, int dump_every) {
  require_state(x1.data, "run_reverse");
  const auto& grid = schedule.t_grid();
  const int n = schedule.n_steps();
  ReverseResult result;
  BridgeState state{x1.data, 1.0};
  for (int k = n, step = 1; k >= 1; --k, ++step) {
    ImageTensor eps;
    try {
      eps = denoiser.predict(state, grid[k]);
    } catch (const Error& e) {
      throw Error(e.code(), "denoiser failed at step " + std::to_string(step) + ": " + e.what());
    }
    require_same_shape(state.data, eps, "denoiser output");
    const ImageTensor x0hat = predict_x0(state, eps, schedule);
    state = reverse_step(state, x0hat, grid[k - 1], schedule, /*deterministic=*/true);
    for (float v : state.data.values()) {
      if (!std::isfinite(v)) {
        throw NumericError("non-finite state after step " + std::to_string(step));
      }
    }
    if (dump_every > 0 && step % dump_every == 0) result.trajectory.push_back(state);
  }
  result.final_state = std::move(state);
  return result;
}

Generated generate(const EncodedImage& img, const Denoiser& denoiser,
                   const NoiseSchedule& schedule, int dump_every) {
  Generated g;
  g.reverse = run_reverse(pack_input(img), denoiser, schedule, dump_every);
  g.prediction = unpack_prediction(g.reverse.final_state);
  return g;
}

InstanceLabelMap labels_from_prediction(const UnpackedPrediction& pred, TaskMode task) {
  if (task == TaskMode::kRdmOnly) return connected_components(rvdist_to_mask(pred.rdm_pred));
  return connected_components(binarize(pred.mask_prob));
}

}  // namespace bseg
