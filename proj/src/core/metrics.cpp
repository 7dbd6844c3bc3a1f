#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <utility>

#include "error.hpp"

namespace bseg {
namespace {

void require_same_grid(const InstanceLabelMap& a, const InstanceLabelMap& b) {
  if (a.height != b.height || a.width != b.width) {
    throw ShapeError("label maps differ in size: " + std::to_string(a.height) + "x" +
                     std::to_string(a.width) + " vs " + std::to_string(b.height) +
                     "x" + std::to_string(b.width));
  }
}

std::vector<std::uint64_t> areas(const InstanceLabelMap& m) {
  std::vector<std::uint64_t> a(m.max_id() + 1, 0);
  for (std::uint32_t id : m.ids) ++a[id];
  return a;
}

}  // namespace

MatchResult iou_matching(const InstanceLabelMap& pred, const InstanceLabelMap& gt,
                         double threshold) {
  require_same_grid(pred, gt);
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw ConfigError("eval.iou", "threshold must lie in [0, 1)");
  }
  const auto pred_area = areas(pred);
  const auto gt_area = areas(gt);
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> overlap;
  for (std::size_t i = 0; i < pred.ids.size(); ++i) {
    if (pred.ids[i] != 0 && gt.ids[i] != 0) ++overlap[{pred.ids[i], gt.ids[i]}];
  }

  std::vector<InstanceMatch> candidates;
  for (const auto& [key, inter] : overlap) {
    const auto [p, g] = key;
    const double uni = static_cast<double>(pred_area[p] + gt_area[g] - inter);
    const double iou = static_cast<double>(inter) / uni;
    if (iou > threshold) candidates.push_back({p, g, iou});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const InstanceMatch& a, const InstanceMatch& b) {
                     return a.iou > b.iou;
                   });

  std::vector<std::uint8_t> pred_used(pred_area.size(), 0);
  std::vector<std::uint8_t> gt_used(gt_area.size(), 0);
  MatchResult result;
  for (const InstanceMatch& m : candidates) {
    if (pred_used[m.pred] || gt_used[m.gt]) {
      if (threshold >= 0.5) {
        throw Error(ErrorCode::kNumeric,
                    "iou_matching: instance matched twice above IoU 0.5");
      }
      continue;
    }
    pred_used[m.pred] = gt_used[m.gt] = 1;
    result.matches.push_back(m);
  }
  std::sort(result.matches.begin(), result.matches.end(),
            [](const InstanceMatch& a, const InstanceMatch& b) { return a.gt < b.gt; });
  for (std::uint32_t p = 1; p < pred_area.size(); ++p) {
    if (pred_area[p] > 0 && !pred_used[p]) result.false_pos.push_back(p);
  }
  for (std::uint32_t g = 1; g < gt_area.size(); ++g) {
    if (gt_area[g] > 0 && !gt_used[g]) result.false_neg.push_back(g);
  }
  return result;
}

PanopticQuality panoptic_quality(const InstanceLabelMap& pred,
                                 const InstanceLabelMap& gt, double threshold) {
  const MatchResult m = iou_matching(pred, gt, threshold);
  PanopticQuality pq;
  pq.tp = m.matches.size();
  pq.fp = m.false_pos.size();
  pq.fn = m.false_neg.size();
  for (const InstanceMatch& match : m.matches) pq.iou_sum += match.iou;
  if (pq.tp + pq.fp + pq.fn == 0) {
    pq.sq = pq.dq = pq.bpq = 1.0;
    return pq;
  }
  pq.sq = pq.tp > 0 ? pq.iou_sum / static_cast<double>(pq.tp) : 0.0;
  pq.dq = static_cast<double>(pq.tp) /
          (static_cast<double>(pq.tp) + 0.5 * static_cast<double>(pq.fp) +
           0.5 * static_cast<double>(pq.fn));
  pq.bpq = pq.sq * pq.dq;
  return pq;
}

std::vector<Centroid> centroids(const InstanceLabelMap& labels) {
  const std::uint32_t n = labels.max_id();
  std::vector<double> sy(n + 1, 0.0), sx(n + 1, 0.0);
  std::vector<std::uint64_t> count(n + 1, 0);
  for (int y = 0; y < labels.height; ++y) {
    for (int x = 0; x < labels.width; ++x) {
      const std::uint32_t id = labels.at(y, x);
      sy[id] += y;
      sx[id] += x;
      ++count[id];
    }
  }
  std::vector<Centroid> out;
  for (std::uint32_t id = 1; id <= n; ++id) {
    if (count[id] == 0) continue;
    const double c = static_cast<double>(count[id]);
    out.push_back({id, sy[id] / c, sx[id] / c});
  }
  return out;
}

DetectionScores detection_from_counts(std::size_t tp, std::size_t n_pred,
                                      std::size_t n_gt) {
  DetectionScores s;
  s.tp = tp;
  s.n_pred = n_pred;
  s.n_gt = n_gt;
  if (n_pred == 0 && n_gt == 0) {
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  s.precision = n_pred > 0 ? static_cast<double>(tp) / static_cast<double>(n_pred) : 0.0;
  s.recall = n_gt > 0 ? static_cast<double>(tp) / static_cast<double>(n_gt) : 0.0;
  const double sum = s.precision + s.recall;
  s.f1 = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
  return s;
}

DetectionScores centroid_metrics(const InstanceLabelMap& pred,
                                 const InstanceLabelMap& gt, double radius) {
  require_same_grid(pred, gt);
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw ConfigError("eval.radius", "must be finite and >= 0");
  }
  const auto pc = centroids(pred);
  const auto gc = centroids(gt);
  struct Pair {
    double dist;
    std::size_t p, g;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    for (std::size_t j = 0; j < gc.size(); ++j) {
      const double d = std::hypot(pc[i].y - gc[j].y, pc[i].x - gc[j].x);
      if (d <= radius) pairs.push_back({d, i, j});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(a.dist, a.p, a.g) < std::tie(b.dist, b.p, b.g);
  });
  std::vector<std::uint8_t> pu(pc.size(), 0), gu(gc.size(), 0);
  std::size_t tp = 0;
  for (const Pair& pr : pairs) {
    if (pu[pr.p] || gu[pr.g]) continue;
    pu[pr.p] = gu[pr.g] = 1;
    ++tp;
  }
  return detection_from_counts(tp, pc.size(), gc.size());
}

}  // namespace bseg
