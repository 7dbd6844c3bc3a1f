#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dataset.hpp"
#include "error.hpp"
#include "rdm.hpp"
#include "tensor_io.hpp"

namespace bseg {
namespace {

constexpr int kAttemptsPerInstance = 400;
constexpr int kMinInstancePixels = 12;

struct Ellipse {
  double cy, cx, a, b, angle;
};

bool inside(const Ellipse& e, double y, double x) {
  const double dy = y - e.cy, dx = x - e.cx;
  const double c = std::cos(e.angle), s = std::sin(e.angle);
  const double u = (dx * c + dy * s) / e.a;
  const double v = (-dx * s + dy * c) / e.b;
  return u * u + v * v <= 1.0;
}

}  // namespace

SynthItem render_synth_item(const SynthOptions& opts, int index) {
  if (opts.size < 16) throw ConfigError("size", "synthetic images need size >= 16");
  if (opts.density < 0) throw ConfigError("density", "must be >= 0");
  const int n = opts.size;
  std::seed_seq seq{static_cast<std::uint32_t>(opts.seed),
                    static_cast<std::uint32_t>(opts.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  Rng rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SynthItem item;
  item.labels = InstanceLabelMap(n, n);
  std::vector<Ellipse> placed;
  std::vector<int> pixels;
  for (int k = 1; k <= opts.density; ++k) {
    bool ok = false;
    for (int attempt = 0; attempt < kAttemptsPerInstance && !ok; ++attempt) {
      const Ellipse e{unit(rng) * n, unit(rng) * n, 3.0 + 5.0 * unit(rng),
                      3.0 + 5.0 * unit(rng), unit(rng) * std::numbers::pi};
      pixels.clear();
      bool clash = false;
      for (int y = 0; y < n && !clash; ++y) {
        for (int x = 0; x < n && !clash; ++x) {
          if (!inside(e, y, x)) continue;
          // Keep a one-pixel background gap (8-neighbourhood) to other cells.
          for (int dy = -1; dy <= 1 && !clash; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              const int yy = y + dy, xx = x + dx;
              if (yy < 0 || xx < 0 || yy >= n || xx >= n) continue;
              if (item.labels.at(yy, xx) != 0) {
                clash = true;
                break;
              }
            }
          }
          pixels.push_back(y * n + x);
        }
      }
      if (clash || static_cast<int>(pixels.size()) < kMinInstancePixels) continue;
      for (int p : pixels) item.labels.ids[p] = static_cast<std::uint32_t>(k);
      placed.push_back(e);
      ok = true;
    }
    if (!ok) {
      throw Error(ErrorCode::kGeneration,
                  "could not place instance " + std::to_string(k) + " of " +
                      std::to_string(opts.density) + " in a " + std::to_string(n) + "x" +
                      std::to_string(n) + " image; try a lower density");
    }
  }

  // Background: low-frequency texture around a bright level.
  const double fy = 0.1 + 0.3 * unit(rng), fx = 0.1 + 0.3 * unit(rng);
  const double py = 2 * std::numbers::pi * unit(rng), px = 2 * std::numbers::pi * unit(rng);
  const double bg_level = 195.0 + 20.0 * unit(rng);
  std::vector<double> cell_level(placed.size());
  std::vector<double> shade_dir(placed.size());
  for (std::size_t k = 0; k < placed.size(); ++k) {
    cell_level[k] = 60.0 + 40.0 * unit(rng);
    shade_dir[k] = 2 * std::numbers::pi * unit(rng);
  }
  std::normal_distribution<double> noise(0.0, 6.0);
  item.image.height = item.image.width = n;
  item.image.pixels.resize(std::size_t(n) * n * 3);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const std::uint32_t id = item.labels.at(y, x);
      double g;
      double tint[3];
      if (id == 0) {
        g = bg_level + 10.0 * std::sin(fy * y + py) * std::cos(fx * x + px);
        tint[0] = 1.0, tint[1] = 0.82, tint[2] = 0.92;
      } else {
        const Ellipse& e = placed[id - 1];
        const double dir = shade_dir[id - 1];
        const double proj = ((y - e.cy) * std::sin(dir) + (x - e.cx) * std::cos(dir)) /
                            std::max(e.a, e.b);
        g = cell_level[id - 1] + 15.0 * proj;
        tint[0] = 0.85, tint[1] = 0.7, tint[2] = 1.15;
      }
      for (int c = 0; c < 3; ++c) {
        const double v = g * tint[c] + noise(rng);
        item.image.pixels[(std::size_t(y) * n + x) * 3 + c] =
            static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return item;
}

int write_synth_dataset(const SynthOptions& opts, const std::filesystem::path& out_dir) {
  if (opts.count < 1) throw ConfigError("n", "must be >= 1");
  const DatasetLayout layout(out_dir);
  for (int i = 0; i < opts.count; ++i) {
    const SynthItem item = render_synth_item(opts, i);
    const std::string stem = item_stem(i);
    write_rgb_png(layout.image_path(stem), item.image);
    write_label_png(layout.label_path(stem), item.labels);
    write_image_tensor(layout.rdm_path(stem), reverse_distance_map(item.labels));
  }
  return opts.count;
}

}  // namespace bseg
