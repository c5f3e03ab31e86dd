// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbox/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rbox {

namespace {

std::array<double, 5> as_array(const BoxDeltad& d) {
  return {d.tx, d.ty, d.talpha, d.th, d.tw};
}

void check_finite(const BoxDeltad& d) {
  for (double v : as_array(d)) {
    if (!std::isfinite(v)) throw InvalidParameter("delta has a nonfinite component");
  }
}

}  // namespace

void LossConfig::validate() const {
  if (!std::isfinite(lambda) || lambda < 0) {
    throw InvalidParameter("lambda must be nonnegative");
  }
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0) {
      throw InvalidParameter("regression weights must be nonnegative");
    }
  }
  if (n_cls && !(*n_cls >= 1)) throw InvalidParameter("n_cls must be at least 1");
  if (n_reg && !(*n_reg >= 1)) throw InvalidParameter("n_reg must be at least 1");
}

double cross_entropy(const AnchorPrediction& pred, ClassLabel label) {
  const auto [p0, p1] = pred.p;
  if (!std::isfinite(p0) || !std::isfinite(p1) || p0 < 0 || p1 < 0 ||
      std::abs(p0 + p1 - 1.0) > 1e-9) {
    throw InvalidParameter("class probabilities must be a distribution");
  }
  const double p = pred.p[static_cast<std::size_t>(label)];
  return -std::log(std::max(p, kProbabilityFloor));
}

double smooth_l1(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

double smooth_l1_grad(double x) {
  if (std::abs(x) < 1.0) return x;
  return x > 0 ? 1.0 : -1.0;
}

double smooth_l1(const BoxDeltad& pred, const BoxDeltad& target,
                 const DeltaWeights& weights) {
  check_finite(pred);
  check_finite(target);
  const auto p = as_array(pred);
  const auto t = as_array(target);
  double sum = 0;
  for (std::size_t k = 0; k < 5; ++k) sum += weights[k] * smooth_l1(p[k] - t[k]);
  return sum;
}

std::array<double, 5> smooth_l1_grad(const BoxDeltad& pred,
                                     const BoxDeltad& target,
                                     const DeltaWeights& weights) {
  check_finite(pred);
  check_finite(target);
  const auto p = as_array(pred);
  const auto t = as_array(target);
  std::array<double, 5> g{};
  for (std::size_t k = 0; k < 5; ++k) g[k] = weights[k] * smooth_l1_grad(p[k] - t[k]);
  return g;
}

LossTerms total_loss(std::span<const AnchorPrediction> preds,
                     std::span<const AnchorLabel> labels,
                     std::span<const std::optional<BoxDeltad>> targets,
                     const LossConfig& cfg) {
  cfg.validate();
  if (preds.size() != labels.size() || targets.size() != labels.size()) {
    throw InvalidParameter("predictions, labels and targets must be aligned");
  }

  double cls_sum = 0;
  double reg_sum = 0;
  std::size_t labelled = 0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const AnchorLabel& label = labels[i];
    if (label.is_ignored()) continue;
    ++labelled;
    cls_sum += cross_entropy(preds[i], label.is_positive() ? ClassLabel::kBuilding
                                                           : ClassLabel::kBackground);
    if (label.is_positive()) {
      if (!targets[i]) {
        throw DataError("positive anchor " + std::to_string(i) +
                        " has no regression target");
      }
      ++positives;
      reg_sum += smooth_l1(preds[i].t, *targets[i], cfg.weights);
    }
  }

  const double n_cls =
      cfg.n_cls.value_or(static_cast<double>(std::max<std::size_t>(labelled, 1)));
  const double n_reg =
      cfg.n_reg.value_or(static_cast<double>(std::max<std::size_t>(positives, 1)));

  LossTerms out;
  out.cls = cls_sum / n_cls;
  out.reg = reg_sum / n_reg;
  out.total = out.cls + cfg.lambda * out.reg;
  return out;
}

}  // namespace rbox
