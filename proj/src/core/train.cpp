#include "train.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "bridge.hpp"
#include "error.hpp"

namespace bseg {

TrainOptions train_options_from(const RunConfig& cfg) {
  TrainOptions o;
  o.iters = static_cast<int>(cfg.get_int("train.iters"));
  o.batch = static_cast<int>(cfg.get_int("train.batch"));
  o.adam.lr = cfg.get_double("train.lr");
  o.adam.beta1 = cfg.get_double("train.adam_beta1");
  o.adam.beta2 = cfg.get_double("train.adam_beta2");
  o.adam.eps = cfg.get_double("train.adam_eps");
  o.ema_decay = cfg.get_double("train.ema_decay");
  o.seed = cfg.get_uint("train.seed");
  o.task = parse_task_mode(cfg.get("train.task"));
  o.width = static_cast<int>(cfg.get_int("model.width"));
  o.depth = static_cast<int>(cfg.get_int("model.depth"));
  o.checkpoint_every = static_cast<int>(cfg.get_int("train.checkpoint_every"));
  if (o.iters < 1) throw ConfigError("train.iters", "must be >= 1");
  if (o.batch < 1) throw ConfigError("train.batch", "must be >= 1");
  if (!(o.adam.lr > 0)) throw ConfigError("train.lr", "must be > 0");
  if (!(o.adam.beta1 >= 0 && o.adam.beta1 < 1)) throw ConfigError("train.adam_beta1", "must lie in [0, 1)");
  if (!(o.adam.beta2 >= 0 && o.adam.beta2 < 1)) throw ConfigError("train.adam_beta2", "must lie in [0, 1)");
  if (!(o.adam.eps > 0)) throw ConfigError("train.adam_eps", "must be > 0");
  if (!(o.ema_decay > 0 && o.ema_decay < 1)) throw ConfigError("train.ema_decay", "must lie in (0, 1)");
  if (o.checkpoint_every < 0) throw ConfigError("train.checkpoint_every", "must be >= 0");
  return o;
}

NoiseSchedule schedule_from(const RunConfig& cfg) {
  const std::int64_t n = cfg.get_int("schedule.n_steps");
  if (n < 1 || n > 100000) throw ConfigError("schedule.n_steps", "must lie in [1, 100000]");
  return build_schedule(static_cast<int>(n), cfg.get_double("schedule.beta_max"),
                        cfg.get_double("schedule.beta_min"));
}

std::string TrainState::rng_state() const {
  std::ostringstream ss;
  ss << rng;
  return ss.str();
}

EndpointPair make_endpoints(const DatasetItem& item, TaskMode task) {
  return {pack_target(item.target, task).data, pack_input(item.image).data};
}

TrainState train(const TrainOptions& opts, const NoiseSchedule& schedule,
                 std::span<const DatasetItem> data, const CheckpointHook& hook) {
  if (data.empty()) throw Error(ErrorCode::kInvalidArgument, "train: dataset is empty");
  std::vector<EndpointPair> endpoints;
  endpoints.reserve(data.size());
  for (const DatasetItem& item : data) {
    endpoints.push_back(make_endpoints(item, opts.task));
    if (!endpoints.back().x0.same_shape(endpoints.front().x0)) {
      throw ShapeError("train: all items must share one size (" + item.stem + ")");
    }
  }

  TrainState st{DenoiserParams{}, AdamState{}, Rng(opts.seed), {}, 0};
  st.params = init_params(reference_layers(opts.width, opts.depth), st.rng, opts.ema_decay);
  st.losses.reserve(opts.iters);

  const double t_min = schedule.t_grid()[1];
  std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
  std::uniform_real_distribution<double> time(t_min, 1.0);
  std::vector<TrainingPair> batch(opts.batch);
  for (int it = 1; it <= opts.iters; ++it) {
    for (TrainingPair& pair : batch) {
      const EndpointPair& ep = endpoints[pick(st.rng)];
      const double t = time(st.rng);
      pair.xt = sample_xt(ep.x0, ep.x1, t, schedule, st.rng);
      pair.target = training_target(pair.xt, ep.x0, schedule);
    }
    const double loss = loss_and_grad(st.params, batch);
    adam_step(st.params, st.adam, opts.adam, it);
    ema_update(st.params);
    st.losses.push_back(loss);
    st.iteration = it;
    if (hook && ((opts.checkpoint_every > 0 && it % opts.checkpoint_every == 0) ||
                 it == opts.iters)) {
      hook(st);
    }
  }
  return st;
}

LossSummary smoothed_losses(std::span<const double> losses, std::size_t window) {
  if (losses.empty() || window == 0) return {};
  window = std::min(window, losses.size());
  const double head = std::accumulate(losses.begin(), losses.begin() + window, 0.0);
  const double tail = std::accumulate(losses.end() - window, losses.end(), 0.0);
  return {head / window, tail / window};
}

}  // namespace bseg
