#pragma once

#include <vector>

#include "denoiser.hpp"
#include "packing.hpp"
#include "schedule.hpp"

namespace bseg {

struct ReverseResult {
  BridgeState final_state;
  std::vector<BridgeState> trajectory;  // every dump_every-th step, oldest first
};

/// Deterministic reverse recursion from `x1` (time 1) down the schedule grid
/// to time 0, stepping through x0hat = X_t - sigma_t * eps at every grid time.
/// With dump_every = k > 0 the state after every k-th step is recorded.
ReverseResult run_reverse(const BridgeState& x1, const Denoiser& denoiser,
                          const NoiseSchedule& schedule, int dump_every = 0);

struct Generated {
  UnpackedPrediction prediction;
  ReverseResult reverse;
};

Generated generate(const EncodedImage& img, const Denoiser& denoiser,
                   const NoiseSchedule& schedule, int dump_every = 0);

/// Instance labels from a prediction: connected components of the
/// thresholded mask, or of the hole-filled thresholded RDM for kRdmOnly.
InstanceLabelMap labels_from_prediction(const UnpackedPrediction& pred, TaskMode task);

}  // namespace bseg
