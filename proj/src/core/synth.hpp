#pragma once

#include <cstdint>
#include <filesystem>

#include "image_io.hpp"
#include "tensor.hpp"

namespace bseg {

struct SynthOptions {
  int count = 10;
  int size = 32;
  int density = 4;  // instances per image
  std::uint64_t seed = 0;
};

struct SynthItem {
  Rgb8Image image;
  InstanceLabelMap labels;
};

/// Renders item `index` of a seeded synthetic set: dark shaded ellipses
/// (semi-axes 3 to 8 px, random rotation) on a bright textured background with
/// Gaussian pixel noise. Distinct instances never touch, even diagonally.
SynthItem render_synth_item(const SynthOptions& opts, int index);

/// Writes images/, labels/ and rdm/ under `out_dir`; returns the item count.
int write_synth_dataset(const SynthOptions& opts, const std::filesystem::path& out_dir);

}  // namespace bseg
