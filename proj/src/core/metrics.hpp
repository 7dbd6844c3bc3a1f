#pragma once

#include <cstdint>
#include <vector>

#include "tensor.hpp"

namespace bseg {

struct InstanceMatch {
  std::uint32_t pred = 0;
  std::uint32_t gt = 0;
  double iou = 0.0;
};

struct MatchResult {
  std::vector<InstanceMatch> matches;      // ascending by gt id
  std::vector<std::uint32_t> false_pos;    // unmatched pred ids, ascending
  std::vector<std::uint32_t> false_neg;    // unmatched gt ids, ascending
};

/// Pairs instances whose IoU strictly exceeds `threshold`.
///
/// For threshold >= 0.5 every qualifying pair is unique on both sides. Lower
/// thresholds fall back to a greedy one-to-one assignment by descending IoU.
MatchResult iou_matching(const InstanceLabelMap& pred, const InstanceLabelMap& gt,
                         double threshold = 0.5);

struct PanopticQuality {
  double bpq = 0.0;
  double sq = 0.0;
  double dq = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double iou_sum = 0.0;  // for pooled aggregation
};

/// Binary panoptic quality. Two empty maps score 1.
PanopticQuality panoptic_quality(const InstanceLabelMap& pred,
                                 const InstanceLabelMap& gt,
                                 double threshold = 0.5);

struct DetectionScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t n_pred = 0;
  std::size_t n_gt = 0;
};

struct Centroid {
  std::uint32_t id = 0;
  double y = 0.0;
  double x = 0.0;
};

/// Mean pixel coordinate of every present instance, ascending id.
std::vector<Centroid> centroids(const InstanceLabelMap& labels);

/// Centroid-distance detection scores with greedy one-to-one matching in
/// ascending distance order (ties broken by pred id, then gt id).
DetectionScores centroid_metrics(const InstanceLabelMap& pred,
                                 const InstanceLabelMap& gt, double radius = 12.0);

/// Scores from raw counts; both empty gives 1 across the board.
DetectionScores detection_from_counts(std::size_t tp, std::size_t n_pred,
                                      std::size_t n_gt);

}  // namespace bseg
