#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tensor.hpp"

namespace bseg {

/// 8-bit interleaved RGB raster.
struct Rgb8Image {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  // H * W * 3
  bool operator==(const Rgb8Image&) const = default;
};

/// Reads any PNG and converts to 8-bit RGB (alpha dropped, gray expanded).
Rgb8Image read_rgb_png(const std::filesystem::path& path);
void write_rgb_png(const std::filesystem::path& path, const Rgb8Image& img);

/// Label maps are single-channel 16-bit PNGs; 8-bit gray files are accepted
/// on read. Ids above 65535 are rejected on write.
InstanceLabelMap read_label_png(const std::filesystem::path& path);
void write_label_png(const std::filesystem::path& path, const InstanceLabelMap& labels);

/// 0/255 8-bit gray PNG of a binary mask.
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

}  // namespace bseg
