// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rbox/geometry.hpp"

namespace rbox {

/// Distribution of random rectangle pairs for estimator studies: sides drawn
/// uniformly from [min_side, max_side], angles from [0, pi), first center in
/// [0, field]^2, and the second center within `max_gap` of the first
/// (uniform over the disk).
struct PairDistribution {
  double min_side = 20.0;
  double max_side = 200.0;
  double max_gap = 100.0;
  double field = 1000.0;
};

std::vector<std::pair<RotatedRectd, RotatedRectd>> random_rect_pairs(
    std::size_t count, std::uint64_t seed, const PairDistribution& dist = {});

struct ConvergenceRow {
  int n = 0;
  double mean_abs_err = 0;
  double max_abs_err = 0;
};

/// |fast_iou - exact_iou| statistics per grid size. Grid sizes are sorted
/// and deduplicated; no pairs gives no rows.
std::vector<ConvergenceRow> convergence_table(
    std::span<const std::pair<RotatedRectd, RotatedRectd>> pairs,
    std::vector<int> grid_sizes);

}  // namespace rbox
