#include "packing.hpp"

#include <algorithm>
#include <string>

#include "error.hpp"

namespace bseg {

TaskMode parse_task_mode(std::string_view name) {
  if (name == "multi") return TaskMode::kMultiTask;
  if (name == "mask") return TaskMode::kMaskOnly;
  if (name == "rvdist") return TaskMode::kRdmOnly;
  throw ConfigError("train.task", "expected multi, mask or rvdist, got '" +
                                      std::string(name) + "'");
}

const char* task_mode_name(TaskMode mode) {
  switch (mode) {
    case TaskMode::kMultiTask: return "multi";
    case TaskMode::kMaskOnly: return "mask";
    case TaskMode::kRdmOnly: return "rvdist";
  }
  return "multi";
}

EncodedImage encode_rgb8(std::span<const std::uint8_t> rgb, int height, int width) {
  if (rgb.size() != std::size_t(height) * width * 3) {
    throw ShapeError("encode_rgb8: buffer size does not match " +
                     std::to_string(height) + "x" + std::to_string(width) + "x3");
  }
  EncodedImage img{ImageTensor(height, width, 3)};
  auto out = img.data.values();
  for (std::size_t i = 0; i < rgb.size(); ++i) {
    out[i] = static_cast<float>(rgb[i] / 127.5 - 1.0);
  }
  return img;
}

TargetPair make_target_pair(const BinaryMask& mask, const ImageTensor& rdm01) {
  if (rdm01.channels() != 1 || rdm01.height() != mask.height ||
      rdm01.width() != mask.width) {
    throw ShapeError("make_target_pair: rdm " + rdm01.shape_string() +
                     " does not match mask " + std::to_string(mask.height) + "x" +
                     std::to_string(mask.width));
  }
  TargetPair pair{ImageTensor(mask.height, mask.width, 1),
                  ImageTensor(mask.height, mask.width, 1)};
  auto m = pair.mask.values();
  auto r = pair.rdm.values();
  auto src = rdm01.values();
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = mask.pixels[i] ? 1.0f : -1.0f;
    r[i] = static_cast<float>(2.0 * src[i] - 1.0);
  }
  return pair;
}

BridgeState pack_input(const EncodedImage& img) {
  const ImageTensor& src = img.data;
  if (src.channels() != 3) {
    throw ShapeError("pack_input: expected 3 channels, got " +
                     std::to_string(src.channels()));
  }
  BridgeState state{ImageTensor(src.height(), src.width(), kStateChannels), 1.0};
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < src.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        const float v = src.at(y, x, c);
        state.data.at(y, x, c) = v;
        state.data.at(y, x, c + 3) = v;
      }
    }
  }
  return state;
}

BridgeState pack_target(const TargetPair& pair, TaskMode mode) {
  if (pair.mask.channels() != 1 || pair.rdm.channels() != 1) {
    throw ShapeError("pack_target: mask and rdm must be single-channel");
  }
  require_same_shape(pair.mask, pair.rdm, "pack_target");
  const ImageTensor& first = mode == TaskMode::kRdmOnly ? pair.rdm : pair.mask;
  const ImageTensor& second = mode == TaskMode::kMaskOnly ? pair.mask : pair.rdm;
  BridgeState state{ImageTensor(first.height(), first.width(), kStateChannels), 0.0};
  for (int y = 0; y < first.height(); ++y) {
    for (int x = 0; x < first.width(); ++x) {
      const float a = first.at(y, x, 0);
      const float b = second.at(y, x, 0);
      for (int c = 0; c < 3; ++c) {
        state.data.at(y, x, c) = a;
        state.data.at(y, x, c + 3) = b;
      }
    }
  }
  return state;
}

namespace {

// Sorted summation keeps the result independent of channel order.
float triple_to_unit(float a, float b, float c) {
  float v[3] = {a, b, c};
  std::sort(v, v + 3);
  const double mean = (static_cast<double>(v[0]) + v[1] + v[2]) / 3.0;
  return static_cast<float>(std::clamp((mean + 1.0) / 2.0, 0.0, 1.0));
}

}  // namespace

UnpackedPrediction unpack_prediction(const BridgeState& state) {
  require_state(state.data, "unpack_prediction");
  const ImageTensor& d = state.data;
  UnpackedPrediction out{ImageTensor(d.height(), d.width(), 1),
                         ImageTensor(d.height(), d.width(), 1)};
  for (int y = 0; y < d.height(); ++y) {
    for (int x = 0; x < d.width(); ++x) {
      out.mask_prob.at(y, x, 0) =
          triple_to_unit(d.at(y, x, 0), d.at(y, x, 1), d.at(y, x, 2));
      out.rdm_pred.at(y, x, 0) =
          triple_to_unit(d.at(y, x, 3), d.at(y, x, 4), d.at(y, x, 5));
    }
  }
  return out;
}

}  // namespace bseg
