#include "tensor.hpp"

#include <algorithm>

#include "error.hpp"

namespace bseg {

ImageTensor::ImageTensor(int height, int width, int channels, float fill)
    : height_(height), width_(width), channels_(channels) {
  if (height < 0 || width < 0 || channels < 0) {
    throw ShapeError("negative tensor dimension");
  }
  data_.assign(std::size_t(height) * width * channels, fill);
}

std::string ImageTensor::shape_string() const {
  return std::to_string(height_) + "x" + std::to_string(width_) + "x" +
         std::to_string(channels_);
}

void require_same_shape(const ImageTensor& a, const ImageTensor& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": " + a.shape_string() + " vs " +
                     b.shape_string());
  }
}

std::uint32_t InstanceLabelMap::max_id() const {
  return ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end());
}

}  // namespace bseg
