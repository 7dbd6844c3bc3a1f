#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "dataset.hpp"
#include "denoiser.hpp"
#include "optim.hpp"
#include "packing.hpp"
#include "schedule.hpp"

namespace bseg {

struct TrainOptions {
  int iters = 5000;
  int batch = 8;
  AdamHyper adam;
  double ema_decay = 0.999;
  std::uint64_t seed = 0;
  TaskMode task = TaskMode::kMultiTask;
  int width = 32;
  int depth = 3;
  int checkpoint_every = 1000;
};

TrainOptions train_options_from(const RunConfig& cfg);
NoiseSchedule schedule_from(const RunConfig& cfg);

/// Mutable training state, exposed to checkpoint hooks.
struct TrainState {
  DenoiserParams params;
  AdamState adam;
  Rng rng;
  std::vector<double> losses;  // one per completed iteration
  int iteration = 0;

  std::string rng_state() const;
};

using CheckpointHook = std::function<void(const TrainState&)>;

/// Supervision endpoints of one item.
struct EndpointPair {
  ImageTensor x0;
  ImageTensor x1;
};

EndpointPair make_endpoints(const DatasetItem& item, TaskMode task);

/// Runs the bridge training loop: per iteration draw `batch` items and times
/// t ~ U[1/n_steps, 1], sample X_t from the posterior, regress eps on
/// (X_t - X_0) / sigma_t, take an Adam step and update the EMA. The hook, if
/// set, fires every checkpoint_every iterations and after the last one.
TrainState train(const TrainOptions& opts, const NoiseSchedule& schedule,
                 std::span<const DatasetItem> data, const CheckpointHook& hook = {});

/// Mean of the first and last `window` losses.
struct LossSummary {
  double initial = 0.0;
  double final = 0.0;
};
LossSummary smoothed_losses(std::span<const double> losses, std::size_t window);

}  // namespace bseg
