#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tensor.hpp"

namespace bseg {

/// Exact squared Euclidean distance transform on a 2D grid.
///
/// `is_site` marks feature pixels; the result holds, for every pixel, the
/// squared distance to the nearest site (0 on sites). Two separable passes of
/// the lower-envelope-of-parabolas algorithm. Grids without sites yield
/// +infinity everywhere.
std::vector<double> squared_edt(std::span<const std::uint8_t> is_site,
                                int height, int width);

/// Distance from each pixel of instance k to the nearest pixel not labelled k.
/// Pixels outside the image count as not-k. Zero outside instance k.
ImageTensor instance_edt(const InstanceLabelMap& labels, std::uint32_t k);

/// Per-instance distances normalized by the instance maximum and inverted so
/// that pixels next to a boundary carry the highest values; background is 0.
ImageTensor reverse_distance_map(const InstanceLabelMap& labels);

}  // namespace bseg
