// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rbox/geometry.hpp"

namespace rbox {

/// Multiangle anchor field over a feature map. `scales` are anchor areas in
/// px^2, `angles` are in radians (any value; reduced mod pi on use) and
/// `aspect` is the h:w side ratio applied to every scale.
struct AnchorGridConfig {
  int feat_width = 1;
  int feat_height = 1;
  double stride = 16.0;
  std::vector<double> scales;
  std::vector<double> angles;
  double aspect = 1.0;

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// One anchor per (cell, scale, angle), ordered row-major over cells, then
/// by scale, then by angle. Centers sit at ((col + 0.5), (row + 0.5)) * stride.
std::vector<RotatedRectd> generate_anchors(const AnchorGridConfig& cfg);

/// Regression target relating a box to its anchor.
template <typename Scalar>
struct BoxDelta {
  Scalar tx = 0;
  Scalar ty = 0;
  Scalar talpha = 0;
  Scalar th = 0;
  Scalar tw = 0;

  friend bool operator==(const BoxDelta&, const BoxDelta&) = default;
};

using BoxDeltad = BoxDelta<double>;

/// Log side ratios beyond this magnitude are rejected by decode().
inline constexpr double kMaxLogRatio = 20.0;

/// x offsets are normalized by the anchor's short side and y offsets by its
/// long side. The angle offset is the raw difference of canonical angles, so
/// pairs straddling the 0/pi seam produce offsets near +-pi.
template <typename Scalar>
BoxDelta<Scalar> encode(const RotatedRect<Scalar>& anchor,
                        const RotatedRect<Scalar>& gt) {
  return {(gt.x() - anchor.x()) / anchor.w(),
          (gt.y() - anchor.y()) / anchor.h(),
          gt.alpha() - anchor.alpha(),
          std::log(gt.h() / anchor.h()),
          std::log(gt.w() / anchor.w())};
}

/// Inverse of encode() followed by canonicalization. Throws InvalidDelta for
/// nonfinite deltas or log ratios beyond kMaxLogRatio.
template <typename Scalar>
RotatedRect<Scalar> decode(const RotatedRect<Scalar>& anchor,
                           const BoxDelta<Scalar>& d) {
  if (!std::isfinite(d.tx) || !std::isfinite(d.ty) ||
      !std::isfinite(d.talpha) || !std::isfinite(d.th) ||
      !std::isfinite(d.tw)) {
    throw InvalidDelta("delta has a nonfinite component");
  }
  if (std::abs(d.th) > Scalar(kMaxLogRatio) ||
      std::abs(d.tw) > Scalar(kMaxLogRatio)) {
    throw InvalidDelta("log side ratio out of range");
  }
  const Scalar x = anchor.x() + d.tx * anchor.w();
  const Scalar y = anchor.y() + d.ty * anchor.h();
  const Scalar h = anchor.h() * std::exp(d.th);
  const Scalar w = anchor.w() * std::exp(d.tw);
  try {
    return canonicalize(x, y, anchor.alpha() + d.talpha, h, w);
  } catch (const InvalidRect& e) {
    throw InvalidDelta(e.what());
  }
}

/// Per-anchor training tag.
struct AnchorLabel {
  enum class Kind : std::uint8_t { kNegative, kPositive, kIgnored };

  Kind kind = Kind::kIgnored;
  std::size_t gt_index = 0;  // meaningful only for kPositive

  static AnchorLabel positive(std::size_t gt) { return {Kind::kPositive, gt}; }
  static AnchorLabel negative() { return {Kind::kNegative, 0}; }
  static AnchorLabel ignored() { return {Kind::kIgnored, 0}; }

  bool is_positive() const noexcept { return kind == Kind::kPositive; }
  bool is_negative() const noexcept { return kind == Kind::kNegative; }
  bool is_ignored() const noexcept { return kind == Kind::kIgnored; }

  friend bool operator==(const AnchorLabel&, const AnchorLabel&) = default;
};

inline constexpr double kDefaultPositiveThreshold = 0.7;
inline constexpr double kDefaultNegativeThreshold = 0.3;
inline constexpr int kDefaultLabelGrid = 32;

/// IoU-based labelling with the anchor as the sampled rectangle of
/// fast_iou(). An anchor is positive when its best IoU reaches
/// `pos_thresh` or when it attains some gt's maximum IoU over all anchors
/// (ties all qualify; a maximum of zero does not). It is negative when its
/// best IoU is below `neg_thresh` and it is not positive, ignored otherwise.
/// A positive anchor carries the index of its highest-IoU gt.
std::vector<AnchorLabel> assign_labels(std::span<const RotatedRectd> anchors,
                                       std::span<const RotatedRectd> gts,
                                       double pos_thresh = kDefaultPositiveThreshold,
                                       double neg_thresh = kDefaultNegativeThreshold,
                                       int n = kDefaultLabelGrid);

/// Draws up to `batch_size` labelled anchors: at most
/// floor(pos_fraction * batch_size) positives, the rest negatives. Ignored
/// anchors are never drawn. Returned indices are unique and ascending; the
/// draw is a pure function of the inputs and `seed`.
std::vector<std::size_t> sample_batch(std::span<const AnchorLabel> labels,
                                      std::size_t batch_size = 128,
                                      double pos_fraction = 0.5,
                                      std::uint64_t seed = 0);

}  // namespace rbox
