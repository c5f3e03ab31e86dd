// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <span>

#include "rbox/anchors.hpp"

namespace rbox {

/// Per-dimension weights in (x, y, alpha, h, w) order.
using DeltaWeights = std::array<double, 5>;

inline constexpr double kProbabilityFloor = 1e-12;

/// Class indices used by cross_entropy().
enum class ClassLabel : int { kBackground = 0, kBuilding = 1 };

struct LossConfig {
  double lambda = 1.0;
  DeltaWeights weights{1.0, 1.0, 1.0, 1.0, 1.0};
  /// Classification normalizer; defaults to the number of labelled
  /// (non-ignored) anchors, at least 1.
  std::optional<double> n_cls;
  /// Regression normalizer; defaults to the number of positives, at least 1.
  std::optional<double> n_reg;

  void validate() const;
};

/// Classifier output for one anchor. `p` is indexed by ClassLabel, i.e.
/// p[0] is background and p[1] is building.
struct AnchorPrediction {
  std::array<double, 2> p{0.5, 0.5};
  BoxDeltad t;
};

/// -log p[label], with the probability floored at kProbabilityFloor.
/// Throws InvalidParameter for a pair that is not a distribution.
double cross_entropy(const AnchorPrediction& pred, ClassLabel label);

/// Huber-style penalty: 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
double smooth_l1(double x);

/// Derivative of smooth_l1(x).
double smooth_l1_grad(double x);

/// Weighted sum of smooth_l1 over the five delta residuals.
double smooth_l1(const BoxDeltad& pred, const BoxDeltad& target,
                 const DeltaWeights& weights = {1, 1, 1, 1, 1});

/// Gradient of the weighted smooth-L1 loss with respect to `pred`.
std::array<double, 5> smooth_l1_grad(const BoxDeltad& pred,
                                     const BoxDeltad& target,
                                     const DeltaWeights& weights = {1, 1, 1, 1, 1});

struct LossTerms {
  double total = 0;
  double cls = 0;  ///< normalized classification sum
  double reg = 0;  ///< normalized regression sum, before lambda
};

/// Combined objective total = cls + lambda * reg. `targets` is aligned with
/// `preds` and `labels`; only positive anchors need a target. Ignored anchors
/// contribute to neither term.
LossTerms total_loss(std::span<const AnchorPrediction> preds,
                     std::span<const AnchorLabel> labels,
                     std::span<const std::optional<BoxDeltad>> targets,
                     const LossConfig& cfg = {});

}  // namespace rbox
