#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bseg {

/// Dense H x W x C float32 grid stored row-major with channels innermost.
class ImageTensor {
 public:
  ImageTensor() = default;
  ImageTensor(int height, int width, int channels, float fill = 0.0f);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float& at(int y, int x, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  float at(int y, int x, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<float> values() noexcept { return data_; }
  std::span<const float> values() const noexcept { return data_; }

  bool same_shape(const ImageTensor& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }
  std::string shape_string() const;

  bool operator==(const ImageTensor&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// Throws ShapeError naming `what` unless a and b share H, W and C.
void require_same_shape(const ImageTensor& a, const ImageTensor& b,
                        const char* what);

/// H x W instance ids; 0 is background, k >= 1 is instance k.
struct InstanceLabelMap {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> ids;

  InstanceLabelMap() = default;
  InstanceLabelMap(int h, int w) : height(h), width(w), ids(std::size_t(h) * w, 0) {}

  std::uint32_t& at(int y, int x) { return ids[std::size_t(y) * width + x]; }
  std::uint32_t at(int y, int x) const { return ids[std::size_t(y) * width + x]; }
  std::uint32_t max_id() const;

  bool operator==(const InstanceLabelMap&) const = default;
};

/// H x W foreground flags (1 = foreground).
struct BinaryMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;

  BinaryMask() = default;
  BinaryMask(int h, int w, std::uint8_t fill = 0)
      : height(h), width(w), pixels(std::size_t(h) * w, fill) {}

  std::uint8_t& at(int y, int x) { return pixels[std::size_t(y) * width + x]; }
  std::uint8_t at(int y, int x) const { return pixels[std::size_t(y) * width + x]; }

  bool operator==(const BinaryMask&) const = default;
};

}  // namespace bseg
