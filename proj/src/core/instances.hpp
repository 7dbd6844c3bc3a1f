#pragma once

#include <cstdint>
#include <vector>

#include "tensor.hpp"

namespace bseg {

/// 4-connected components, ids assigned in raster-scan first-touch order.
InstanceLabelMap connected_components(const BinaryMask& mask);

/// Turns background regions not 4-connected to the image border into foreground.
BinaryMask fill_holes(const BinaryMask& mask);

/// Foreground iff value >= 0.5. Values outside [0, 1] raise DomainError.
BinaryMask binarize(const ImageTensor& prob);

/// Single-task reverse-distance path: threshold at 0.5, then fill holes.
BinaryMask rvdist_to_mask(const ImageTensor& rdm_pred);

BinaryMask foreground_of(const InstanceLabelMap& labels);

struct ShapeStats {
  std::uint32_t id = 0;
  std::uint64_t area = 0;
  std::uint64_t perimeter = 0;  // crack edges, image border included
  double circularity = 0.0;     // 4 pi area / perimeter^2
};

/// One entry per present instance id, ascending.
std::vector<ShapeStats> shape_stats(const InstanceLabelMap& labels);

}  // namespace bseg
