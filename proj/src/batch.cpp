// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbox/batch.hpp"

#include <string>

#include "rbox/postprocess.hpp"

namespace rbox {

namespace {

void require_same_rows(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw InvalidParameter(std::string(what) + ": row counts differ (" +
                           std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

std::vector<RotatedRectd> to_rects(const BoxArrayRef& boxes, const char* name) {
  std::vector<RotatedRectd> out;
  out.reserve(static_cast<std::size_t>(boxes.rows()));
  for (Eigen::Index i = 0; i < boxes.rows(); ++i) {
    try {
      out.push_back(canonicalize(boxes(i, 0), boxes(i, 1), boxes(i, 2),
                                 boxes(i, 3), boxes(i, 4)));
    } catch (const InvalidRect& e) {
      throw InvalidRect(std::string(name) + " " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

BoxArray to_array(const std::vector<RotatedRectd>& rects) {
  BoxArray out(static_cast<Eigen::Index>(rects.size()), 5);
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const auto& r = rects[i];
    out.row(static_cast<Eigen::Index>(i)) << r.x(), r.y(), r.alpha(), r.h(), r.w();
  }
  return out;
}

IoUMatrix<double> iou_batch(const BoxArrayRef& a, const BoxArrayRef& b, int n,
                            IouMode mode) {
  const auto ra = to_rects(a, "a");
  const auto rb = to_rects(b, "b");
  return iou_matrix<double>(ra, rb, mode, n);
}

std::vector<std::size_t> nms_batch(const BoxArrayRef& boxes,
                                   const Eigen::Ref<const Eigen::VectorXd>& scores,
                                   double thresh, int n) {
  require_same_rows(boxes.rows(), scores.size(), "nms_batch");
  const auto rects = to_rects(boxes);
  std::vector<Detection> dets;
  dets.reserve(rects.size());
  for (std::size_t i = 0; i < rects.size(); ++i) {
    dets.push_back({rects[i], scores[static_cast<Eigen::Index>(i)]});
  }
  return nms_indices(dets, thresh, n);
}

DeltaArray encode_batch(const BoxArrayRef& anchors, const BoxArrayRef& gts) {
  require_same_rows(anchors.rows(), gts.rows(), "encode_batch");
  const auto ra = to_rects(anchors, "anchor");
  const auto rg = to_rects(gts, "gt");
  DeltaArray out(anchors.rows(), 5);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const BoxDeltad d = encode(ra[i], rg[i]);
    out.row(static_cast<Eigen::Index>(i)) << d.tx, d.ty, d.talpha, d.th, d.tw;
  }
  return out;
}

BoxArray decode_batch(const BoxArrayRef& anchors,
                      const Eigen::Ref<const DeltaArray>& deltas) {
  require_same_rows(anchors.rows(), deltas.rows(), "decode_batch");
  const auto ra = to_rects(anchors, "anchor");
  std::vector<RotatedRectd> out;
  out.reserve(ra.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const auto row = deltas.row(static_cast<Eigen::Index>(i));
    try {
      out.push_back(decode(ra[i], BoxDeltad{row(0), row(1), row(2), row(3), row(4)}));
    } catch (const InvalidDelta& e) {
      throw InvalidDelta("delta " + std::to_string(i) + ": " + e.what());
    }
  }
  return to_array(out);
}

}  // namespace rbox
