// Command-line front end. Talks to the library only through bseg.h.

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bseg/bseg.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct ConfigDeleter {
  void operator()(bseg_config* c) const { bseg_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<bseg_config, ConfigDeleter>;

// Configuration problems are the caller's fault; everything else is a runtime failure.
int report(bseg_status status, const char* command) {
  if (status == BSEG_OK) return kExitOk;
  std::fprintf(stderr, "bseg %s: %s: %s\n", command, bseg_status_string(status),
               bseg_last_error());
  return status == BSEG_ERR_CONFIG ? kExitUsage : kExitRuntime;
}

struct ConfigFlags {
  std::string file;
  std::vector<std::string> overrides;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.file, "key=value configuration file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", flags.overrides, "Override a configuration key (key=value)");
}

// Applies file, then --set overrides, then dedicated flags (last writer wins).
bseg_status build_config(const ConfigFlags& flags,
                         const std::vector<std::pair<std::string, std::string>>& extra,
                         ConfigPtr& out) {
  bseg_config* raw = nullptr;
  bseg_status st = bseg_config_create(&raw);
  if (st != BSEG_OK) return st;
  out.reset(raw);
  if (!flags.file.empty() && (st = bseg_config_load(raw, flags.file.c_str())) != BSEG_OK) {
    return st;
  }
  for (const std::string& kv : flags.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "--set expects key=value, got '%s'\n", kv.c_str());
      return BSEG_ERR_CONFIG;
    }
    st = bseg_config_set(raw, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != BSEG_OK) return st;
  }
  for (const auto& [k, v] : extra) {
    if ((st = bseg_config_set(raw, k.c_str(), v.c_str())) != BSEG_OK) return st;
  }
  return BSEG_OK;
}

template <typename T>
void add_if(std::vector<std::pair<std::string, std::string>>& extra, const char* key,
            const std::optional<T>& value) {
  if (!value) return;
  if constexpr (std::is_same_v<T, std::string>) {
    extra.emplace_back(key, *value);
  } else {
    extra.emplace_back(key, std::to_string(*value));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell instance segmentation with an image-to-image Schroedinger bridge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bseg_version()));

  // synth
  bseg_synth_options synth_opts{10, 32, 4, 0};
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic labelled dataset");
  synth->add_option("--n", synth_opts.count, "Number of images")->check(CLI::PositiveNumber);
  synth->add_option("--size", synth_opts.size, "Image side length in pixels")
      ->check(CLI::Range(16, 4096));
  synth->add_option("--density", synth_opts.density, "Instances per image")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", synth_opts.seed, "Random seed");
  synth->add_option("--out", synth_out, "Output dataset directory")->required();

  // rdm
  std::string rdm_data;
  auto* rdm = app.add_subcommand("rdm", "Compute cached reverse distance maps for a dataset");
  rdm->add_option("--data", rdm_data, "Dataset directory")->required()->check(CLI::ExistingDirectory);

  // train
  ConfigFlags train_cfg;
  std::string train_data, train_out;
  std::optional<long long> train_iters, train_batch, train_seed;
  std::optional<double> train_lr;
  std::optional<std::string> train_task;
  auto* train = app.add_subcommand("train", "Train the reference denoiser");
  add_config_flags(train, train_cfg);
  train->add_option("--data", train_data, "Training dataset directory")->check(CLI::ExistingDirectory);
  train->add_option("--out", train_out, "Run directory")->required();
  train->add_option("--iters", train_iters, "train.iters");
  train->add_option("--batch", train_batch, "train.batch");
  train->add_option("--seed", train_seed, "train.seed");
  train->add_option("--lr", train_lr, "train.lr");
  train->add_option("--task", train_task, "train.task (multi, mask or rvdist)");

  // infer
  ConfigFlags infer_cfg;
  std::string infer_ckpt, infer_input, infer_out;
  std::optional<long long> infer_dump;
  bool infer_raw = false;
  auto* infer = app.add_subcommand("infer", "Segment images with a trained checkpoint");
  add_config_flags(infer, infer_cfg);
  infer->add_option("--checkpoint", infer_ckpt, "checkpoint.bseg")->required()->check(CLI::ExistingFile);
  infer->add_option("--input", infer_input, "Dataset or image directory")->required()->check(CLI::ExistingDirectory);
  infer->add_option("--out", infer_out, "Output directory")->required();
  infer->add_option("--dump-every", infer_dump, "Write every k-th intermediate state");
  infer->add_flag("--raw", infer_raw, "Use raw parameters instead of the EMA set");

  // eval
  ConfigFlags eval_cfg;
  std::string eval_pred, eval_gt, eval_out;
  std::optional<double> eval_radius, eval_iou;
  auto* eval = app.add_subcommand("eval", "Score predicted label maps against ground truth");
  add_config_flags(eval, eval_cfg);
  eval->add_option("--pred", eval_pred, "Predicted label maps")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--gt", eval_gt, "Ground-truth label maps")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--out", eval_out, "Directory for metrics.csv and summary.txt");
  eval->add_option("--radius", eval_radius, "eval.radius");
  eval->add_option("--iou", eval_iou, "eval.iou");

  // shape-stats
  std::string stats_labels, stats_out;
  auto* stats = app.add_subcommand("shape-stats", "Per-instance area, perimeter and circularity");
  stats->add_option("--labels", stats_labels, "Label-map directory")->required()->check(CLI::ExistingDirectory);
  stats->add_option("--out", stats_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (synth->parsed()) {
    int n = 0;
    const bseg_status st = bseg_synth(&synth_opts, synth_out.c_str(), &n);
    if (st == BSEG_OK) std::printf("synth: wrote %d items to %s\n", n, synth_out.c_str());
    return report(st, "synth");
  }
  if (rdm->parsed()) {
    int n = 0;
    const bseg_status st = bseg_compute_rdms(rdm_data.c_str(), &n);
    if (st == BSEG_OK) std::printf("rdm: wrote %d reverse distance maps\n", n);
    return report(st, "rdm");
  }
  if (train->parsed()) {
    std::vector<std::pair<std::string, std::string>> extra;
    if (!train_data.empty()) extra.emplace_back("data.dir", train_data);
    add_if(extra, "train.iters", train_iters);
    add_if(extra, "train.batch", train_batch);
    add_if(extra, "train.seed", train_seed);
    add_if(extra, "train.task", train_task);
    if (train_lr) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", *train_lr);
      extra.emplace_back("train.lr", buf);
    }
    ConfigPtr cfg;
    bseg_status st = build_config(train_cfg, extra, cfg);
    if (st != BSEG_OK) return report(st, "train");
    bseg_train_summary s{};
    st = bseg_train(cfg.get(), train_out.c_str(), &s);
    if (st == BSEG_OK) {
      std::printf("train: %d iterations, smoothed loss %.6g -> %.6g, run dir %s\n",
                  s.iterations, s.initial_loss, s.final_loss, train_out.c_str());
    }
    return report(st, "train");
  }
  if (infer->parsed()) {
    std::vector<std::pair<std::string, std::string>> extra;
    add_if(extra, "infer.dump_every", infer_dump);
    if (infer_raw) extra.emplace_back("infer.use_ema", "false");
    ConfigPtr cfg;
    bseg_status st = build_config(infer_cfg, extra, cfg);
    if (st != BSEG_OK) return report(st, "infer");
    bseg_infer_summary s{};
    st = bseg_infer(cfg.get(), infer_ckpt.c_str(), infer_input.c_str(), infer_out.c_str(), &s);
    if (st == BSEG_OK) {
      std::printf("infer: %d images, %zu instances, outputs in %s\n", s.images, s.instances,
                  infer_out.c_str());
    }
    return report(st, "infer");
  }
  if (eval->parsed()) {
    std::vector<std::pair<std::string, std::string>> extra;
    add_if(extra, "eval.radius", eval_radius);
    add_if(extra, "eval.iou", eval_iou);
    ConfigPtr cfg;
    bseg_status st = build_config(eval_cfg, extra, cfg);
    if (st != BSEG_OK) return report(st, "eval");
    bseg_eval_summary s{};
    st = bseg_eval(cfg.get(), eval_pred.c_str(), eval_gt.c_str(),
                   eval_out.empty() ? nullptr : eval_out.c_str(), &s);
    if (st == BSEG_OK) {
      std::printf("eval: %d images, bPQ %.4f SQ %.4f DQ %.4f precision %.4f recall %.4f F1 %.4f\n",
                  s.images, s.bpq, s.sq, s.dq, s.precision, s.recall, s.f1);
    }
    return report(st, "eval");
  }
  if (stats->parsed()) {
    size_t rows = 0;
    const bseg_status st = bseg_shape_stats(stats_labels.c_str(), stats_out.c_str(), &rows);
    if (st == BSEG_OK) std::printf("shape-stats: %zu instances written to %s\n", rows, stats_out.c_str());
    return report(st, "shape-stats");
  }
  return kExitUsage;
}
