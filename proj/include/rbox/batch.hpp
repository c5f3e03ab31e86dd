// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

// Array-level entry points over K x 5 row-major blocks of (x, y, alpha, h, w),
// radians only. This is the surface a host-language extension wraps; every
// routine forwards row by row to the scalar library calls, and rejects
// malformed rows with a message naming the row.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "rbox/anchors.hpp"
#include "rbox/geometry.hpp"

namespace rbox {

using BoxArray = Eigen::Matrix<double, Eigen::Dynamic, 5, Eigen::RowMajor>;
using DeltaArray = Eigen::Matrix<double, Eigen::Dynamic, 5, Eigen::RowMajor>;
using BoxArrayRef = Eigen::Ref<const BoxArray>;

/// Canonicalizes each row; throws InvalidRect naming the first bad row.
std::vector<RotatedRectd> to_rects(const BoxArrayRef& boxes, const char* name = "box");

BoxArray to_array(const std::vector<RotatedRectd>& rects);

IoUMatrix<double> iou_batch(const BoxArrayRef& a, const BoxArrayRef& b, int n,
                            IouMode mode);

/// Row indices of the survivors of nms_indices(); `scores` has one entry per
/// row of `boxes`.
std::vector<std::size_t> nms_batch(const BoxArrayRef& boxes,
                                   const Eigen::Ref<const Eigen::VectorXd>& scores,
                                   double thresh, int n);

DeltaArray encode_batch(const BoxArrayRef& anchors, const BoxArrayRef& gts);

BoxArray decode_batch(const BoxArrayRef& anchors, const Eigen::Ref<const DeltaArray>& deltas);

}  // namespace rbox
