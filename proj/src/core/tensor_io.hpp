#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tensor.hpp"

namespace bseg {

// Container layout, all little-endian:
//   "BSGT" | u32 version | u32 rank | u64 dims[rank] | f32 payload (row-major)
inline constexpr char kTensorMagic[4] = {'B', 'S', 'G', 'T'};
inline constexpr std::uint32_t kTensorVersion = 1;

struct RawTensor {
  std::vector<std::uint64_t> dims;
  std::vector<float> values;
};

std::string encode_tensor(const RawTensor& t);
/// Throws FormatError with the byte offset of the first problem.
RawTensor decode_tensor(std::string_view bytes);

void write_tensor_file(const std::filesystem::path& path, const RawTensor& t);
RawTensor read_tensor_file(const std::filesystem::path& path);

/// Rank-3 (H, W, C) view of an image tensor and back. Rank-2 files load as C = 1.
RawTensor to_raw(const ImageTensor& t);
ImageTensor to_image(const RawTensor& t);

void write_image_tensor(const std::filesystem::path& path, const ImageTensor& t);
ImageTensor read_image_tensor(const std::filesystem::path& path);

}  // namespace bseg
