#pragma once

#include <filesystem>
#include <string>

#include "checkpoint.hpp"
#include "config.hpp"
#include "packing.hpp"
#include "schedule.hpp"
#include "synth.hpp"

namespace bseg {

// Command-level workflows. Each writes its outputs under fixed relative names
// and returns a small summary.

int run_synth(const SynthOptions& opts, const std::filesystem::path& out_dir);

int run_rdm(const std::filesystem::path& data_dir);

struct TrainSummary {
  int iterations = 0;
  double initial_loss = 0.0;  // smoothed over the first window
  double final_loss = 0.0;    // smoothed over the last window
};

/// Writes config.echo, loss.csv and checkpoint.bseg into run_dir.
TrainSummary run_train(const RunConfig& cfg, const std::filesystem::path& run_dir);

/// Checkpoint plus the schedule and task recorded with it at training time.
struct TrainedModel {
  Checkpoint checkpoint;
  NoiseSchedule schedule;
  TaskMode task;
};

TrainedModel load_trained_model(const std::filesystem::path& checkpoint);

struct InferSummary {
  int images = 0;
  std::size_t instances = 0;
};

/// Writes pred/<stem>.png16, mask/<stem>.png, prob/<stem>.bsgt and, when
/// infer.dump_every > 0, traj/<stem>_<step>.bsgt into out_dir.
InferSummary run_infer(const RunConfig& cfg, const std::filesystem::path& checkpoint,
                       const std::filesystem::path& input_dir,
                       const std::filesystem::path& out_dir);

struct EvalSummary {
  int images = 0;
  // Per-image means.
  double bpq = 0.0, sq = 0.0, dq = 0.0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  // Pooled over all images.
  double pooled_bpq = 0.0, pooled_sq = 0.0, pooled_dq = 0.0;
  double pooled_precision = 0.0, pooled_recall = 0.0, pooled_f1 = 0.0;
};

/// Writes metrics.csv and summary.txt into out_dir (if non-empty).
EvalSummary run_eval(const RunConfig& cfg, const std::filesystem::path& pred_dir,
                     const std::filesystem::path& gt_dir,
                     const std::filesystem::path& out_dir);

/// Writes image,id,area,perimeter,circularity rows; returns the row count.
std::size_t run_shape_stats(const std::filesystem::path& label_dir,
                            const std::filesystem::path& csv_path);

inline constexpr std::size_t kLossSmoothingWindow = 100;

}  // namespace bseg
