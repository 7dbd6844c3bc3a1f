#include "bseg/bseg.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "checkpoint.hpp"
#include "config.hpp"
#include "error.hpp"
#include "inference.hpp"
#include "instances.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "rdm.hpp"
#include "schedule.hpp"
#include "train.hpp"

struct bseg_config {
  bseg::RunConfig cfg;
};

struct bseg_schedule {
  bseg::NoiseSchedule schedule;
};

struct bseg_model {
  bseg::TrainedModel model;
};

namespace {

thread_local std::string g_last_error;

bseg_status fail(bseg_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <typename Fn>
bseg_status guarded(Fn&& fn) {
  try {
    fn();
    return BSEG_OK;
  } catch (const bseg::Error& e) {
    return fail(static_cast<bseg_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BSEG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BSEG_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BSEG_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw bseg::Error(bseg::ErrorCode::kInvalidArgument, what);
}

void require_dims(int height, int width) {
  require(height > 0 && width > 0, "height and width must be positive");
}

bseg::InstanceLabelMap labels_from(const uint16_t* ids, int height, int width) {
  bseg::InstanceLabelMap m(height, width);
  for (std::size_t i = 0; i < m.ids.size(); ++i) m.ids[i] = ids[i];
  return m;
}

void copy_labels(const bseg::InstanceLabelMap& m, uint16_t* out) {
  for (std::size_t i = 0; i < m.ids.size(); ++i) {
    if (m.ids[i] > 0xFFFF) {
      throw bseg::Error(bseg::ErrorCode::kInvalidArgument, "more than 65535 instances");
    }
    out[i] = static_cast<uint16_t>(m.ids[i]);
  }
}

}  // namespace

extern "C" {

const char* bseg_status_string(bseg_status status) {
  switch (status) {
    case BSEG_OK: return "ok";
    case BSEG_ERR_CONFIG: return "configuration error";
    case BSEG_ERR_SHAPE: return "shape error";
    case BSEG_ERR_DOMAIN: return "domain error";
    case BSEG_ERR_NUMERIC: return "numeric error";
    case BSEG_ERR_FORMAT: return "format error";
    case BSEG_ERR_IO: return "i/o error";
    case BSEG_ERR_MISSING_INSTANCE: return "missing instance";
    case BSEG_ERR_GENERATION: return "generation error";
    case BSEG_ERR_DEGENERATE_TIME: return "degenerate time";
    case BSEG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BSEG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* bseg_last_error(void) { return g_last_error.c_str(); }

const char* bseg_version(void) { return "0.1.0"; }

bseg_status bseg_config_create(bseg_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new bseg_config{};
  });
}

void bseg_config_destroy(bseg_config* cfg) { delete cfg; }

bseg_status bseg_config_load(bseg_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg && path, "null argument");
    cfg->cfg.load(path);
  });
}

bseg_status bseg_config_set(bseg_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg && key && value, "null argument");
    cfg->cfg.set(key, value);
  });
}

bseg_status bseg_config_get(const bseg_config* cfg, const char* key, char* buf, size_t buflen,
                            size_t* needed) {
  return guarded([&] {
    require(cfg && key, "null argument");
    const std::string& v = cfg->cfg.get(key);
    if (needed) *needed = v.size() + 1;
    require(buf != nullptr && buflen > v.size(), "buffer too small");
    std::memcpy(buf, v.c_str(), v.size() + 1);
  });
}

bseg_status bseg_schedule_create(int n_steps, double beta_max, double beta_min,
                                 bseg_schedule** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new bseg_schedule{bseg::build_schedule(n_steps, beta_max, beta_min)};
  });
}

void bseg_schedule_destroy(bseg_schedule* schedule) { delete schedule; }

bseg_status bseg_schedule_sigma_at(const bseg_schedule* schedule, double t, double* sigma_fwd,
                                   double* sigma_bwd) {
  return guarded([&] {
    require(schedule != nullptr, "schedule is null");
    const bseg::SigmaPair s = schedule->schedule.sigma_at(t);
    if (sigma_fwd) *sigma_fwd = s.fwd;
    if (sigma_bwd) *sigma_bwd = s.bwd;
  });
}

bseg_status bseg_reverse_distance_map(const uint16_t* labels, int height, int width,
                                      float* out) {
  return guarded([&] {
    require(labels && out, "null buffer");
    require_dims(height, width);
    const bseg::ImageTensor r = bseg::reverse_distance_map(labels_from(labels, height, width));
    std::memcpy(out, r.values().data(), r.size() * sizeof(float));
  });
}

bseg_status bseg_compute_metrics(const uint16_t* pred, const uint16_t* gt, int height,
                                 int width, double iou_threshold, double radius,
                                 bseg_image_metrics* out) {
  return guarded([&] {
    require(pred && gt && out, "null argument");
    require_dims(height, width);
    const auto p = labels_from(pred, height, width);
    const auto g = labels_from(gt, height, width);
    const bseg::PanopticQuality pq = bseg::panoptic_quality(p, g, iou_threshold);
    const bseg::DetectionScores d = bseg::centroid_metrics(p, g, radius);
    *out = bseg_image_metrics{pq.bpq, pq.sq, pq.dq, pq.tp, pq.fp, pq.fn,
                              d.precision, d.recall, d.f1};
  });
}

bseg_status bseg_connected_components(const uint8_t* mask, int height, int width,
                                      uint16_t* labels_out, size_t* n_instances) {
  return guarded([&] {
    require(mask && labels_out, "null buffer");
    require_dims(height, width);
    bseg::BinaryMask m(height, width);
    for (std::size_t i = 0; i < m.pixels.size(); ++i) m.pixels[i] = mask[i] ? 1 : 0;
    const bseg::InstanceLabelMap labels = bseg::connected_components(m);
    copy_labels(labels, labels_out);
    if (n_instances) *n_instances = labels.max_id();
  });
}

bseg_status bseg_model_load(const char* checkpoint_path, bseg_model** out) {
  return guarded([&] {
    require(checkpoint_path && out, "null argument");
    *out = new bseg_model{bseg::load_trained_model(checkpoint_path)};
  });
}

void bseg_model_destroy(bseg_model* model) { delete model; }

bseg_status bseg_model_segment(const bseg_model* model, const uint8_t* rgb, int height,
                               int width, int use_ema, uint16_t* labels_out,
                               float* mask_prob_out, size_t* n_instances) {
  return guarded([&] {
    require(model && rgb && labels_out, "null argument");
    require_dims(height, width);
    const bseg::ReferenceDenoiser denoiser(
        model->model.checkpoint.params, use_ema ? bseg::ParamSet::kEma : bseg::ParamSet::kRaw);
    const std::span<const uint8_t> pixels(rgb, std::size_t(height) * width * 3);
    const bseg::Generated g =
        bseg::generate(bseg::encode_rgb8(pixels, height, width), denoiser, model->model.schedule);
    const bseg::InstanceLabelMap labels = bseg::labels_from_prediction(g.prediction, model->model.task);
    copy_labels(labels, labels_out);
    if (mask_prob_out) {
      std::memcpy(mask_prob_out, g.prediction.mask_prob.values().data(),
                  g.prediction.mask_prob.size() * sizeof(float));
    }
    if (n_instances) *n_instances = labels.max_id();
  });
}

bseg_status bseg_synth(const bseg_synth_options* opts, const char* out_dir, int* n_written) {
  return guarded([&] {
    require(opts && out_dir, "null argument");
    const bseg::SynthOptions o{opts->count, opts->size, opts->density, opts->seed};
    const int n = bseg::run_synth(o, out_dir);
    if (n_written) *n_written = n;
  });
}

bseg_status bseg_compute_rdms(const char* data_dir, int* n_written) {
  return guarded([&] {
    require(data_dir != nullptr, "data_dir is null");
    const int n = bseg::run_rdm(data_dir);
    if (n_written) *n_written = n;
  });
}

bseg_status bseg_train(const bseg_config* cfg, const char* run_dir, bseg_train_summary* out) {
  return guarded([&] {
    require(cfg && run_dir, "null argument");
    const bseg::TrainSummary s = bseg::run_train(cfg->cfg, run_dir);
    if (out) *out = bseg_train_summary{s.iterations, s.initial_loss, s.final_loss};
  });
}

bseg_status bseg_infer(const bseg_config* cfg, const char* checkpoint_path,
                       const char* input_dir, const char* out_dir, bseg_infer_summary* out) {
  return guarded([&] {
    require(cfg && checkpoint_path && input_dir && out_dir, "null argument");
    const bseg::InferSummary s = bseg::run_infer(cfg->cfg, checkpoint_path, input_dir, out_dir);
    if (out) *out = bseg_infer_summary{s.images, s.instances};
  });
}

bseg_status bseg_eval(const bseg_config* cfg, const char* pred_dir, const char* gt_dir,
                      const char* out_dir, bseg_eval_summary* out) {
  return guarded([&] {
    require(cfg && pred_dir && gt_dir, "null argument");
    const bseg::EvalSummary s =
        bseg::run_eval(cfg->cfg, pred_dir, gt_dir, out_dir ? out_dir : "");
    if (out) {
      *out = bseg_eval_summary{s.images,          s.bpq,           s.sq,
                               s.dq,              s.precision,     s.recall,
                               s.f1,              s.pooled_bpq,    s.pooled_sq,
                               s.pooled_dq,       s.pooled_precision, s.pooled_recall,
                               s.pooled_f1};
    }
  });
}

bseg_status bseg_shape_stats(const char* label_dir, const char* csv_path, size_t* n_rows) {
  return guarded([&] {
    require(label_dir && csv_path, "null argument");
    const std::size_t n = bseg::run_shape_stats(label_dir, csv_path);
    if (n_rows) *n_rows = n;
  });
}

}  // extern "C"
