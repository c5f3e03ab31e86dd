// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbox/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace rbox {

std::vector<std::pair<RotatedRectd, RotatedRectd>> random_rect_pairs(
    std::size_t count, std::uint64_t seed, const PairDistribution& dist) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> side(dist.min_side, dist.max_side);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> pos(0.0, dist.field);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto rect_at = [&](double x, double y) {
    const double a = angle(rng);
    const double s1 = side(rng);
    const double s2 = side(rng);
    return canonicalize(x, y, a, s1, s2);
  };

  std::vector<std::pair<RotatedRectd, RotatedRectd>> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = pos(rng);
    const double y = pos(rng);
    const RotatedRectd first = rect_at(x, y);
    const double r = dist.max_gap * std::sqrt(unit(rng));
    const double t = 2 * std::numbers::pi * unit(rng);
    const RotatedRectd second = rect_at(x + r * std::cos(t), y + r * std::sin(t));
    pairs.emplace_back(first, second);
  }
  return pairs;
}

std::vector<ConvergenceRow> convergence_table(
    std::span<const std::pair<RotatedRectd, RotatedRectd>> pairs,
    std::vector<int> grid_sizes) {
  std::sort(grid_sizes.begin(), grid_sizes.end());
  grid_sizes.erase(std::unique(grid_sizes.begin(), grid_sizes.end()), grid_sizes.end());

  std::vector<ConvergenceRow> rows;
  if (pairs.empty()) return rows;

  std::vector<double> exact;
  exact.reserve(pairs.size());
  for (const auto& [a, b] : pairs) exact.push_back(exact_iou(a, b));

  for (int n : grid_sizes) {
    const PointGrid<double> grid(n);
    ConvergenceRow row{n, 0.0, 0.0};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double err = std::abs(fast_iou(pairs[i].first, pairs[i].second, grid) - exact[i]);
      row.mean_abs_err += err;
      row.max_abs_err = std::max(row.max_abs_err, err);
    }
    row.mean_abs_err /= static_cast<double>(pairs.size());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rbox
