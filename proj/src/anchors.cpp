// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbox/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace rbox {

void AnchorGridConfig::validate() const {
  if (feat_width < 1 || feat_height < 1) {
    throw ConfigError("feature map dimensions must be at least 1");
  }
  if (!std::isfinite(stride) || stride < 1) {
    throw ConfigError("stride must be at least 1");
  }
  if (scales.empty()) throw ConfigError("scales must not be empty");
  if (angles.empty()) throw ConfigError("angles must not be empty");
  for (double s : scales) {
    if (!std::isfinite(s) || !(s > 0)) {
      throw ConfigError("scales must be positive and finite");
    }
  }
  for (double a : angles) {
    if (!std::isfinite(a)) throw ConfigError("angles must be finite");
  }
  if (!std::isfinite(aspect) || !(aspect > 0)) {
    throw ConfigError("aspect must be positive and finite");
  }
}

std::vector<RotatedRectd> generate_anchors(const AnchorGridConfig& cfg) {
  cfg.validate();

  // Side pairs per scale: h * w = scale, h / w = aspect.
  std::vector<std::pair<double, double>> sides;
  sides.reserve(cfg.scales.size());
  for (double s : cfg.scales) {
    sides.emplace_back(std::sqrt(s * cfg.aspect), std::sqrt(s / cfg.aspect));
  }

  std::vector<RotatedRectd> anchors;
  anchors.reserve(static_cast<std::size_t>(cfg.feat_width) * cfg.feat_height *
                  sides.size() * cfg.angles.size());
  for (int row = 0; row < cfg.feat_height; ++row) {
    const double cy = (row + 0.5) * cfg.stride;
    for (int col = 0; col < cfg.feat_width; ++col) {
      const double cx = (col + 0.5) * cfg.stride;
      for (const auto& [h, w] : sides) {
        for (double a : cfg.angles) {
          anchors.push_back(canonicalize(cx, cy, a, h, w));
        }
      }
    }
  }
  return anchors;
}

std::vector<AnchorLabel> assign_labels(std::span<const RotatedRectd> anchors,
                                       std::span<const RotatedRectd> gts,
                                       double pos_thresh, double neg_thresh,
                                       int n) {
  if (anchors.empty()) throw InvalidParameter("anchor list is empty");
  if (!(neg_thresh >= 0 && neg_thresh <= pos_thresh && pos_thresh <= 1)) {
    throw InvalidParameter("thresholds must satisfy 0 <= neg <= pos <= 1");
  }
  if (n < 1) throw InvalidParameter("grid size must be at least 1");

  std::vector<AnchorLabel> labels(anchors.size(), AnchorLabel::negative());
  if (gts.empty()) return labels;

  const IoUMatrix<double> iou = iou_matrix(anchors, gts, IouMode::kFast, n);

  const Eigen::VectorXd gt_best = iou.colwise().maxCoeff().transpose();
  for (Eigen::Index i = 0; i < iou.rows(); ++i) {
    Eigen::Index best_gt = 0;
    const double best = iou.row(i).maxCoeff(&best_gt);

    bool is_gt_argmax = false;
    for (Eigen::Index j = 0; j < iou.cols(); ++j) {
      if (gt_best[j] > 0 && iou(i, j) == gt_best[j]) {
        is_gt_argmax = true;
        break;
      }
    }

    auto& label = labels[static_cast<std::size_t>(i)];
    if (is_gt_argmax || best >= pos_thresh) {
      label = AnchorLabel::positive(static_cast<std::size_t>(best_gt));
    } else if (best < neg_thresh) {
      label = AnchorLabel::negative();
    } else {
      label = AnchorLabel::ignored();
    }
  }
  return labels;
}

std::vector<std::size_t> sample_batch(std::span<const AnchorLabel> labels,
                                      std::size_t batch_size,
                                      double pos_fraction, std::uint64_t seed) {
  if (!(pos_fraction > 0 && pos_fraction < 1)) {
    throw InvalidParameter("pos_fraction must lie in (0, 1)");
  }
  if (batch_size < 2) throw InvalidParameter("batch_size must be at least 2");

  std::vector<std::size_t> positives;
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].is_positive()) positives.push_back(i);
    if (labels[i].is_negative()) negatives.push_back(i);
  }
  if (positives.empty() && negatives.empty()) {
    throw InvalidParameter("no positive or negative anchors to sample");
  }

  std::mt19937_64 rng(seed);
  const auto max_pos = static_cast<std::size_t>(
      std::floor(pos_fraction * static_cast<double>(batch_size)));
  const std::size_t n_pos = std::min(positives.size(), max_pos);
  const std::size_t n_neg = std::min(negatives.size(), batch_size - n_pos);

  std::shuffle(positives.begin(), positives.end(), rng);
  std::shuffle(negatives.begin(), negatives.end(), rng);

  std::vector<std::size_t> out;
  out.reserve(n_pos + n_neg);
  out.insert(out.end(), positives.begin(), positives.begin() + n_pos);
  out.insert(out.end(), negatives.begin(), negatives.begin() + n_neg);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rbox
