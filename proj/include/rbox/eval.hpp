// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rbox/geometry.hpp"
#include "rbox/postprocess.hpp"

namespace rbox {

inline constexpr int kDefaultEvalGrid = 128;

struct EvalOptions {
  double iou_cut = 0.5;  ///< a pair matches only when IoU > iou_cut
  IouMode mode = IouMode::kExact;
  int n = kDefaultEvalGrid;  ///< grid size when mode is kFast
};

/// Outcome of matching one image. `det_match[i]` holds the gt index of a true
/// positive detection and is empty for a false positive; `gt_match[j]` holds
/// the matched detection index and is empty for a miss.
struct MatchReport {
  std::vector<std::optional<std::size_t>> det_match;
  std::vector<std::optional<std::size_t>> gt_match;

  std::size_t true_positives() const;
  std::size_t false_positives() const { return det_match.size() - true_positives(); }
  std::size_t false_negatives() const { return gt_match.size() - true_positives(); }
};

/// Greedy highest-overlap matching: repeatedly pairs the unmatched gt and
/// unmatched detection with the largest IoU above the cut (ties go to the
/// lower gt index, then the lower detection index). Each detection matches
/// at most one gt.
MatchReport match_image(std::span<const Detection> dets,
                        std::span<const RotatedRectd> gts,
                        const EvalOptions& opts = {});

/// Detections and ground truth of one image.
struct ImageSample {
  std::vector<Detection> dets;
  std::vector<RotatedRectd> gts;
};

struct PrPoint {
  double recall = 0;
  double precision = 0;

  friend bool operator==(const PrPoint&, const PrPoint&) = default;
};

struct PrCurve {
  std::vector<PrPoint> points;  ///< one per prefix of the score-sorted sweep
  double ap = 0;
};

/// Area under the precision envelope of `points`: precision at recall r is
/// replaced by the best precision at any recall >= r and the resulting step
/// function is integrated over [0, max recall].
double average_precision(std::span<const PrPoint> points);

/// Pools detections over all images and sweeps them by descending score
/// (ties in image order, then detection order). Each prefix is scored by
/// re-running match_image() on the affected image. Throws DataError when
/// there is no ground truth at all.
PrCurve pr_curve(std::span<const ImageSample> images, const EvalOptions& opts = {});

}  // namespace rbox
