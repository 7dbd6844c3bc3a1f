#include "instances.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"

namespace bseg {
namespace {

constexpr int kDy[4] = {-1, 1, 0, 0};
constexpr int kDx[4] = {0, 0, -1, 1};

}  // namespace

InstanceLabelMap connected_components(const BinaryMask& mask) {
  InstanceLabelMap labels(mask.height, mask.width);
  std::vector<int> stack;
  std::uint32_t next = 1;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(y, x) || labels.at(y, x) != 0) continue;
      const std::uint32_t id = next++;
      labels.at(y, x) = id;
      stack.push_back(y * mask.width + x);
      while (!stack.empty()) {
        const int idx = stack.back();
        stack.pop_back();
        const int cy = idx / mask.width;
        const int cx = idx % mask.width;
        for (int d = 0; d < 4; ++d) {
          const int ny = cy + kDy[d];
          const int nx = cx + kDx[d];
          if (ny < 0 || nx < 0 || ny >= mask.height || nx >= mask.width) continue;
          if (!mask.at(ny, nx) || labels.at(ny, nx) != 0) continue;
          labels.at(ny, nx) = id;
          stack.push_back(ny * mask.width + nx);
        }
      }
    }
  }
  return labels;
}

BinaryMask fill_holes(const BinaryMask& mask) {
  const int h = mask.height;
  const int w = mask.width;
  std::vector<std::uint8_t> outside(std::size_t(h) * w, 0);
  std::vector<int> stack;
  auto seed = [&](int y, int x) {
    const std::size_t i = std::size_t(y) * w + x;
    if (!mask.pixels[i] && !outside[i]) {
      outside[i] = 1;
      stack.push_back(static_cast<int>(i));
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(0, x);
    seed(h - 1, x);
  }
  for (int y = 0; y < h; ++y) {
    seed(y, 0);
    seed(y, w - 1);
  }
  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    const int cy = idx / w;
    const int cx = idx % w;
    for (int d = 0; d < 4; ++d) {
      const int ny = cy + kDy[d];
      const int nx = cx + kDx[d];
      if (ny < 0 || nx < 0 || ny >= h || nx >= w) continue;
      seed(ny, nx);
    }
  }
  BinaryMask out(h, w);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] = outside[i] ? 0 : 1;
  }
  return out;
}

BinaryMask binarize(const ImageTensor& prob) {
  if (prob.channels() != 1) {
    throw ShapeError("binarize: expected a single-channel map, got " + prob.shape_string());
  }
  BinaryMask out(prob.height(), prob.width());
  auto v = prob.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0f && v[i] <= 1.0f)) {
      throw DomainError("binarize: value " + std::to_string(v[i]) +
                        " outside [0, 1] at index " + std::to_string(i));
    }
    out.pixels[i] = v[i] >= 0.5f ? 1 : 0;
  }
  return out;
}

BinaryMask rvdist_to_mask(const ImageTensor& rdm_pred) {
  return fill_holes(binarize(rdm_pred));
}

BinaryMask foreground_of(const InstanceLabelMap& labels) {
  BinaryMask out(labels.height, labels.width);
  for (std::size_t i = 0; i < labels.ids.size(); ++i) {
    out.pixels[i] = labels.ids[i] != 0 ? 1 : 0;
  }
  return out;
}

std::vector<ShapeStats> shape_stats(const InstanceLabelMap& labels) {
  const std::uint32_t n = labels.max_id();
  std::vector<ShapeStats> acc(n + 1);
  for (int y = 0; y < labels.height; ++y) {
    for (int x = 0; x < labels.width; ++x) {
      const std::uint32_t id = labels.at(y, x);
      if (id == 0) continue;
      ShapeStats& s = acc[id];
      ++s.area;
      for (int d = 0; d < 4; ++d) {
        const int ny = y + kDy[d];
        const int nx = x + kDx[d];
        const bool inside = ny >= 0 && nx >= 0 && ny < labels.height && nx < labels.width;
        if (!inside || labels.at(ny, nx) != id) ++s.perimeter;
      }
    }
  }
  std::vector<ShapeStats> out;
  for (std::uint32_t id = 1; id <= n; ++id) {
    ShapeStats s = acc[id];
    if (s.area == 0) continue;
    s.id = id;
    const double p = static_cast<double>(s.perimeter);
    s.circularity = 4.0 * std::numbers::pi * static_cast<double>(s.area) / (p * p);
    out.push_back(s);
  }
  return out;
}

}  // namespace bseg
