#include "rdm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"

namespace bseg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D lower envelope pass over f (length n), writing into d.
void edt_1d(const double* f, double* d, int n, std::vector<int>& v,
            std::vector<double>& z) {
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s > z[k]) break;
      --k;  // z[0] is -inf, so k never drops below 0
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(d, d + n, kInf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double diff = q - v[j];
    d[q] = diff * diff + f[v[j]];
  }
}

struct Box {
  int y0, x0, y1, x1;  // inclusive
};

}  // namespace

std::vector<double> squared_edt(std::span<const std::uint8_t> is_site,
                                int height, int width) {
  if (is_site.size() != std::size_t(height) * width) {
    throw ShapeError("squared_edt: site buffer does not match grid");
  }
  const int longest = std::max(height, width);
  std::vector<int> v(longest + 1);
  std::vector<double> z(longest + 2);
  std::vector<double> f(longest), d(longest);
  std::vector<double> out(is_site.size());

  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) {
      f[y] = is_site[std::size_t(y) * width + x] ? 0.0 : kInf;
    }
    edt_1d(f.data(), d.data(), height, v, z);
    for (int y = 0; y < height; ++y) out[std::size_t(y) * width + x] = d[y];
  }
  for (int y = 0; y < height; ++y) {
    double* row = out.data() + std::size_t(y) * width;
    std::copy(row, row + width, f.begin());
    edt_1d(f.data(), row, width, v, z);
  }
  return out;
}

namespace {

// Squared EDT of instance k restricted to its bounding box grown by one pixel;
// the grown ring never contains k, so it supplies the nearest-boundary sites
// that lie outside the box (including the virtual frame around the image).
void instance_distances(const InstanceLabelMap& labels, std::uint32_t k,
                        const Box& box, std::vector<double>& dist) {
  const int h = box.y1 - box.y0 + 3;
  const int w = box.x1 - box.x0 + 3;
  std::vector<std::uint8_t> sites(std::size_t(h) * w, 1);
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      if (labels.at(y, x) == k) {
        sites[std::size_t(y - box.y0 + 1) * w + (x - box.x0 + 1)] = 0;
      }
    }
  }
  dist = squared_edt(sites, h, w);
}

std::vector<Box> bounding_boxes(const InstanceLabelMap& labels) {
  const std::uint32_t n = labels.max_id();
  std::vector<Box> boxes(n + 1, Box{std::numeric_limits<int>::max(),
                                    std::numeric_limits<int>::max(), -1, -1});
  for (int y = 0; y < labels.height; ++y) {
    for (int x = 0; x < labels.width; ++x) {
      const std::uint32_t id = labels.at(y, x);
      if (id == 0) continue;
      Box& b = boxes[id];
      b.y0 = std::min(b.y0, y);
      b.x0 = std::min(b.x0, x);
      b.y1 = std::max(b.y1, y);
      b.x1 = std::max(b.x1, x);
    }
  }
  return boxes;
}

}  // namespace

ImageTensor instance_edt(const InstanceLabelMap& labels, std::uint32_t k) {
  const std::vector<Box> boxes = bounding_boxes(labels);
  if (k == 0 || k >= boxes.size() || boxes[k].y1 < 0) {
    throw Error(ErrorCode::kMissingInstance,
                "instance " + std::to_string(k) + " not present in label map");
  }
  const Box& box = boxes[k];
  std::vector<double> dist;
  instance_distances(labels, k, box, dist);
  const int w = box.x1 - box.x0 + 3;
  ImageTensor out(labels.height, labels.width, 1);
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      if (labels.at(y, x) != k) continue;
      out.at(y, x, 0) = static_cast<float>(
          std::sqrt(dist[std::size_t(y - box.y0 + 1) * w + (x - box.x0 + 1)]));
    }
  }
  return out;
}

ImageTensor reverse_distance_map(const InstanceLabelMap& labels) {
  ImageTensor out(labels.height, labels.width, 1);
  const std::vector<Box> boxes = bounding_boxes(labels);
  std::vector<double> dist;
  for (std::uint32_t k = 1; k < boxes.size(); ++k) {
    const Box& box = boxes[k];
    if (box.y1 < 0) continue;
    instance_distances(labels, k, box, dist);
    const int w = box.x1 - box.x0 + 3;
    double d_min = kInf;
    double d_max = 0.0;
    for (int y = box.y0; y <= box.y1; ++y) {
      for (int x = box.x0; x <= box.x1; ++x) {
        if (labels.at(y, x) != k) continue;
        const double d = std::sqrt(dist[std::size_t(y - box.y0 + 1) * w + (x - box.x0 + 1)]);
        d_min = std::min(d_min, d);
        d_max = std::max(d_max, d);
      }
    }
    for (int y = box.y0; y <= box.y1; ++y) {
      for (int x = box.x0; x <= box.x1; ++x) {
        if (labels.at(y, x) != k) continue;
        const double d = std::sqrt(dist[std::size_t(y - box.y0 + 1) * w + (x - box.x0 + 1)]);
        const double r = d_max > d_min ? (d_max - d) / d_max : 1.0;
        float& cell = out.at(y, x, 0);
        cell = std::max(cell, static_cast<float>(r));
      }
    }
  }
  return out;
}

}  // namespace bseg
