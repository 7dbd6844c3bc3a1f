#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "denoiser.hpp"
#include "optim.hpp"

namespace bseg {

// Checkpoint container, little-endian:
//   "BSEG" | u32 version | u32 n_layers | n_layers x (u32 in, u32 out, u32 kernel)
//   | u64 n_values | f32 values[n] | f32 adam_m[n] | f32 adam_v[n] | f32 ema[n]
//   | f64 ema_decay | u64 adam_step
//   | u32 len + metadata text (key=value lines) | u32 len + rng state text
inline constexpr char kCheckpointMagic[4] = {'B', 'S', 'E', 'G'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  DenoiserParams params;
  AdamState adam;
  std::string metadata;
  std::string rng_state;
};

std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::string_view bytes);

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace bseg
