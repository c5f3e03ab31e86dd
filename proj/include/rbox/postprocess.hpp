// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbox/geometry.hpp"

namespace rbox {

struct Detection {
  RotatedRectd rect;
  double score = 0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

inline constexpr int kDefaultNmsGrid = 32;

/// Greedy suppression. Returns indices into `dets` of the survivors, ordered
/// by descending score with ties kept in input order. A candidate is dropped
/// when fast_iou(kept, candidate, n) > iou_thresh for some earlier kept box,
/// so iou_thresh = 1 disables suppression.
std::vector<std::size_t> nms_indices(std::span<const Detection> dets,
                                     double iou_thresh, int n = kDefaultNmsGrid);

/// Same as nms_indices() but returns the surviving detections.
std::vector<Detection> nms(std::span<const Detection> dets, double iou_thresh,
                           int n = kDefaultNmsGrid);

}  // namespace rbox
