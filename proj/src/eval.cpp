// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbox/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rbox {

namespace {

void check_inputs(std::span<const Detection> dets, const EvalOptions& opts) {
  if (!(opts.iou_cut >= 0 && opts.iou_cut <= 1)) {
    throw InvalidParameter("iou cut must lie in [0, 1]");
  }
  if (opts.mode == IouMode::kFast && opts.n < 1) {
    throw InvalidParameter("grid size must be at least 1");
  }
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const double s = dets[i].score;
    if (!std::isfinite(s) || s < 0 || s > 1) {
      throw InvalidParameter("detection " + std::to_string(i) +
                             " has a score outside [0, 1]");
    }
  }
}

/// gts x dets overlap table; in fast mode the gt is the sampled rectangle.
IoUMatrix<double> overlap_table(std::span<const Detection> dets,
                                std::span<const RotatedRectd> gts,
                                const EvalOptions& opts) {
  std::vector<RotatedRectd> rects;
  rects.reserve(dets.size());
  for (const auto& d : dets) rects.push_back(d.rect);
  return iou_matrix<double>(gts, rects, opts.mode, opts.n, 1);
}

/// Greedy matching restricted to the detection columns flagged in `active`.
MatchReport greedy_match(const IoUMatrix<double>& iou,
                         const std::vector<bool>& active, double cut) {
  const auto n_gt = static_cast<std::size_t>(iou.rows());
  const auto n_det = static_cast<std::size_t>(iou.cols());
  MatchReport report;
  report.gt_match.assign(n_gt, std::nullopt);
  report.det_match.assign(n_det, std::nullopt);

  for (;;) {
    double best = cut;
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    for (std::size_t g = 0; g < n_gt; ++g) {
      if (report.gt_match[g]) continue;
      for (std::size_t d = 0; d < n_det; ++d) {
        if (!active[d] || report.det_match[d]) continue;
        const double v = iou(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(d));
        if (v > best) {
          best = v;
          pick = {g, d};
        }
      }
    }
    if (!pick) break;
    report.gt_match[pick->first] = pick->second;
    report.det_match[pick->second] = pick->first;
  }
  return report;
}

}  // namespace

std::size_t MatchReport::true_positives() const {
  return static_cast<std::size_t>(
      std::count_if(det_match.begin(), det_match.end(),
                    [](const auto& m) { return m.has_value(); }));
}

MatchReport match_image(std::span<const Detection> dets,
                        std::span<const RotatedRectd> gts,
                        const EvalOptions& opts) {
  check_inputs(dets, opts);
  const IoUMatrix<double> iou = overlap_table(dets, gts, opts);
  return greedy_match(iou, std::vector<bool>(dets.size(), true), opts.iou_cut);
}

double average_precision(std::span<const PrPoint> points) {
  if (points.empty()) return 0;
  std::vector<PrPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const PrPoint& a, const PrPoint& b) {
    return a.recall < b.recall;
  });
  // Sweep from the highest recall down, carrying the running maximum
  // precision; each distinct recall level closes a rectangle to its left.
  double ap = 0;
  double envelope = 0;
  std::size_t i = sorted.size();
  while (i > 0) {
    const double level = sorted[i - 1].recall;
    while (i > 0 && sorted[i - 1].recall == level) {
      envelope = std::max(envelope, sorted[i - 1].precision);
      --i;
    }
    const double lower = i > 0 ? sorted[i - 1].recall : 0.0;
    ap += (level - lower) * envelope;
  }
  return std::clamp(ap, 0.0, 1.0);
}

PrCurve pr_curve(std::span<const ImageSample> images, const EvalOptions& opts) {
  std::size_t total_gts = 0;
  for (const auto& img : images) {
    check_inputs(img.dets, opts);
    total_gts += img.gts.size();
  }
  if (total_gts == 0) throw DataError("no ground-truth boxes; recall is undefined");

  struct Entry {
    double score;
    std::size_t image;
    std::size_t det;
  };
  std::vector<Entry> pool;
  std::vector<IoUMatrix<double>> tables;
  tables.reserve(images.size());
  for (std::size_t m = 0; m < images.size(); ++m) {
    tables.push_back(overlap_table(images[m].dets, images[m].gts, opts));
    for (std::size_t d = 0; d < images[m].dets.size(); ++d) {
      pool.push_back({images[m].dets[d].score, m, d});
    }
  }
  std::stable_sort(pool.begin(), pool.end(), [](const Entry& a, const Entry& b) {
    return a.score > b.score;
  });

  std::vector<std::vector<bool>> active(images.size());
  std::vector<std::size_t> image_tp(images.size(), 0);
  for (std::size_t m = 0; m < images.size(); ++m) {
    active[m].assign(images[m].dets.size(), false);
  }

  PrCurve curve;
  curve.points.reserve(pool.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const Entry& e = pool[k];
    active[e.image][e.det] = true;
    const std::size_t now =
        greedy_match(tables[e.image], active[e.image], opts.iou_cut).true_positives();
    tp = tp - image_tp[e.image] + now;
    image_tp[e.image] = now;
    curve.points.push_back({static_cast<double>(tp) / static_cast<double>(total_gts),
                            static_cast<double>(tp) / static_cast<double>(k + 1)});
  }
  curve.ap = average_precision(curve.points);
  return curve;
}

}  // namespace rbox
