#include "pipeline.hpp"

#include <cstdio>
#include <sstream>

#include "checkpoint.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "fsutil.hpp"
#include "inference.hpp"
#include "instances.hpp"
#include "metrics.hpp"
#include "tensor_io.hpp"
#include "train.hpp"

namespace bseg {

namespace fs = std::filesystem;

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string loss_csv(const std::vector<double>& losses) {
  std::string out = "iteration,loss\n";
  for (std::size_t i = 0; i < losses.size(); ++i) {
    out += std::to_string(i + 1) + "," + format_double(losses[i]) + "\n";
  }
  return out;
}

std::string metadata_get(const std::string& text, const std::string& key) {
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  throw FormatError("checkpoint metadata lacks " + key, 0);
}

}  // namespace

int run_synth(const SynthOptions& opts, const fs::path& out_dir) {
  return write_synth_dataset(opts, out_dir);
}

int run_rdm(const fs::path& data_dir) { return compute_dataset_rdms(data_dir); }

TrainSummary run_train(const RunConfig& cfg, const fs::path& run_dir) {
  cfg.require("data.dir");
  const TrainOptions opts = train_options_from(cfg);
  const NoiseSchedule schedule = schedule_from(cfg);
  const std::vector<DatasetItem> data = load_dataset(cfg.get("data.dir"));

  ensure_directory(run_dir);
  write_file_atomic(run_dir / "config.echo", cfg.to_text());
  const std::string metadata = cfg.to_text();
  auto save = [&](const TrainState& st) {
    write_checkpoint(run_dir / "checkpoint.bseg",
                     Checkpoint{st.params, st.adam, metadata, st.rng_state()});
    write_file_atomic(run_dir / "loss.csv", loss_csv(st.losses));
  };
  const TrainState st = train(opts, schedule, data, save);
  const LossSummary s = smoothed_losses(st.losses, kLossSmoothingWindow);
  return {st.iteration, s.initial, s.final};
}

TrainedModel load_trained_model(const fs::path& checkpoint) {
  Checkpoint ckpt = read_checkpoint(checkpoint);
  RunConfig trained;
  for (const char* key : {"schedule.n_steps", "schedule.beta_max", "schedule.beta_min",
                          "train.task"}) {
    trained.set(key, metadata_get(ckpt.metadata, key));
  }
  return {std::move(ckpt), schedule_from(trained), parse_task_mode(trained.get("train.task"))};
}

InferSummary run_infer(const RunConfig& cfg, const fs::path& checkpoint,
                       const fs::path& input_dir, const fs::path& out_dir) {
  // Schedule and task come from the training run; inference keys from cfg.
  const TrainedModel model = load_trained_model(checkpoint);
  const NoiseSchedule& schedule = model.schedule;
  const TaskMode task = model.task;
  const int dump_every = static_cast<int>(cfg.get_int("infer.dump_every"));
  if (dump_every < 0) throw ConfigError("infer.dump_every", "must be >= 0");
  const ReferenceDenoiser denoiser(
      model.checkpoint.params, cfg.get_bool("infer.use_ema") ? ParamSet::kEma : ParamSet::kRaw);

  const fs::path image_dir = resolve_image_dir(input_dir);
  const auto stems = list_stems(image_dir, ".png");
  if (stems.empty()) throw IoError("no .png images in " + image_dir.string());
  ensure_directory(out_dir / "pred");
  InferSummary summary;
  for (const std::string& stem : stems) {
    const Rgb8Image rgb = read_rgb_png(image_dir / (stem + ".png"));
    const Generated g = generate(encode_rgb8(rgb.pixels, rgb.height, rgb.width), denoiser,
                                 schedule, dump_every);
    const InstanceLabelMap labels = labels_from_prediction(g.prediction, task);
    write_label_png(out_dir / "pred" / (stem + kLabelExtension), labels);
    write_mask_png(out_dir / "mask" / (stem + ".png"), foreground_of(labels));
    write_image_tensor(out_dir / "prob" / (stem + kTensorExtension), g.prediction.mask_prob);
    for (std::size_t i = 0; i < g.reverse.trajectory.size(); ++i) {
      const int step = static_cast<int>((i + 1) * dump_every);
      char name[32];
      std::snprintf(name, sizeof name, "_%03d", step);
      write_image_tensor(out_dir / "traj" / (stem + name + kTensorExtension),
                         g.reverse.trajectory[i].data);
    }
    ++summary.images;
    summary.instances += labels.max_id();
  }
  return summary;
}

EvalSummary run_eval(const RunConfig& cfg, const fs::path& pred_dir, const fs::path& gt_dir,
                     const fs::path& out_dir) {
  const double iou = cfg.get_double("eval.iou");
  const double radius = cfg.get_double("eval.radius");
  const fs::path pred_labels = resolve_label_dir(pred_dir);
  const fs::path gt_labels = resolve_label_dir(gt_dir);
  const auto stems = list_stems(gt_labels, kLabelExtension);
  if (stems.empty()) throw IoError("no ground-truth label maps in " + gt_labels.string());

  EvalSummary s;
  std::size_t tp = 0, fp = 0, fn = 0, ctp = 0, npred = 0, ngt = 0;
  double iou_sum = 0.0;
  std::string csv = "image,bpq,sq,dq,tp,fp,fn,precision,recall,f1\n";
  for (const std::string& stem : stems) {
    const fs::path pred_file = pred_labels / (stem + kLabelExtension);
    if (!fs::exists(pred_file)) throw IoError("missing prediction " + pred_file.string());
    const InstanceLabelMap pred = read_label_png(pred_file);
    const InstanceLabelMap gt = read_label_png(gt_labels / (stem + kLabelExtension));
    const PanopticQuality pq = panoptic_quality(pred, gt, iou);
    const DetectionScores det = centroid_metrics(pred, gt, radius);
    s.bpq += pq.bpq;
    s.sq += pq.sq;
    s.dq += pq.dq;
    s.precision += det.precision;
    s.recall += det.recall;
    s.f1 += det.f1;
    tp += pq.tp;
    fp += pq.fp;
    fn += pq.fn;
    iou_sum += pq.iou_sum;
    ctp += det.tp;
    npred += det.n_pred;
    ngt += det.n_gt;
    csv += stem + "," + format_double(pq.bpq) + "," + format_double(pq.sq) + "," +
           format_double(pq.dq) + "," + std::to_string(pq.tp) + "," + std::to_string(pq.fp) +
           "," + std::to_string(pq.fn) + "," + format_double(det.precision) + "," +
           format_double(det.recall) + "," + format_double(det.f1) + "\n";
    ++s.images;
  }
  const double n = s.images;
  s.bpq /= n;
  s.sq /= n;
  s.dq /= n;
  s.precision /= n;
  s.recall /= n;
  s.f1 /= n;
  if (tp + fp + fn == 0) {
    s.pooled_sq = s.pooled_dq = s.pooled_bpq = 1.0;
  } else {
    s.pooled_sq = tp > 0 ? iou_sum / double(tp) : 0.0;
    s.pooled_dq = double(tp) / (double(tp) + 0.5 * double(fp) + 0.5 * double(fn));
    s.pooled_bpq = s.pooled_sq * s.pooled_dq;
  }
  const DetectionScores pooled = detection_from_counts(ctp, npred, ngt);
  s.pooled_precision = pooled.precision;
  s.pooled_recall = pooled.recall;
  s.pooled_f1 = pooled.f1;

  if (!out_dir.empty()) {
    write_file_atomic(out_dir / "metrics.csv", csv);
    std::string txt = "{\n";
    auto field = [&](const char* k, double v, bool last = false) {
      txt += std::string("  \"") + k + "\": " + format_double(v) + (last ? "\n" : ",\n");
    };
    field("images", n);
    field("bpq", s.bpq);
    field("sq", s.sq);
    field("dq", s.dq);
    field("precision", s.precision);
    field("recall", s.recall);
    field("f1", s.f1);
    field("pooled_bpq", s.pooled_bpq);
    field("pooled_sq", s.pooled_sq);
    field("pooled_dq", s.pooled_dq);
    field("pooled_precision", s.pooled_precision);
    field("pooled_recall", s.pooled_recall);
    field("pooled_f1", s.pooled_f1, true);
    txt += "}\n";
    write_file_atomic(out_dir / "summary.txt", txt);
  }
  return s;
}

std::size_t run_shape_stats(const fs::path& label_dir, const fs::path& csv_path) {
  const fs::path dir = resolve_label_dir(label_dir);
  const auto stems = list_stems(dir, kLabelExtension);
  std::string csv = "image,id,area,perimeter,circularity\n";
  std::size_t rows = 0;
  for (const std::string& stem : stems) {
    for (const ShapeStats& s : shape_stats(read_label_png(dir / (stem + kLabelExtension)))) {
      csv += stem + "," + std::to_string(s.id) + "," + std::to_string(s.area) + "," +
             std::to_string(s.perimeter) + "," + format_double(s.circularity) + "\n";
      ++rows;
    }
  }
  write_file_atomic(csv_path, csv);
  return rows;
}

}  // namespace bseg
