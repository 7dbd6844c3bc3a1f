#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "bridge.hpp"
#include "tensor.hpp"

namespace bseg {

/// H x W x 3 RGB image mapped to [-1, 1].
struct EncodedImage {
  ImageTensor data;
};

/// Training target in state range: mask in {-1, +1}, rdm in [-1, 1].
struct TargetPair {
  ImageTensor mask;
  ImageTensor rdm;
};

/// Which channels of X_0 carry which supervision signal.
enum class TaskMode {
  kMultiTask,   // mask x3, rdm x3
  kMaskOnly,    // mask x6
  kRdmOnly,     // rdm x6
};

TaskMode parse_task_mode(std::string_view name);
const char* task_mode_name(TaskMode mode);

/// 8-bit interleaved RGB to v / 127.5 - 1.
EncodedImage encode_rgb8(std::span<const std::uint8_t> rgb, int height, int width);

/// Binary mask (0/1) and reverse distance map in [0, 1] to state range.
TargetPair make_target_pair(const BinaryMask& mask, const ImageTensor& rdm01);

/// X_1 = (X, X).
BridgeState pack_input(const EncodedImage& img);

/// X_0 = (M, M, M, R, R, R) for the multi-task layout.
BridgeState pack_target(const TargetPair& pair, TaskMode mode = TaskMode::kMultiTask);

struct UnpackedPrediction {
  ImageTensor mask_prob;  // H x W x 1 in [0, 1]
  ImageTensor rdm_pred;   // H x W x 1 in [0, 1]
};

/// Averages each channel triple, maps [-1, 1] to [0, 1] and clamps.
UnpackedPrediction unpack_prediction(const BridgeState& state);

}  // namespace bseg
