// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbox/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rbox {

std::vector<std::size_t> nms_indices(std::span<const Detection> dets,
                                     double iou_thresh, int n) {
  if (!(iou_thresh >= 0 && iou_thresh <= 1)) {
    throw InvalidParameter("iou threshold must lie in [0, 1]");
  }
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const double s = dets[i].score;
    if (!std::isfinite(s) || s < 0 || s > 1) {
      throw InvalidParameter("detection " + std::to_string(i) +
                             " has a score outside [0, 1]");
    }
  }
  const PointGrid<double> grid(n);

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });

  std::vector<std::size_t> kept;
  for (std::size_t cand : order) {
    const bool suppressed =
        std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
          return fast_iou(dets[k].rect, dets[cand].rect, grid) > iou_thresh;
        });
    if (!suppressed) kept.push_back(cand);
  }
  return kept;
}

std::vector<Detection> nms(std::span<const Detection> dets, double iou_thresh,
                           int n) {
  std::vector<Detection> out;
  for (std::size_t i : nms_indices(dets, iou_thresh, n)) out.push_back(dets[i]);
  return out;
}

}  // namespace rbox
