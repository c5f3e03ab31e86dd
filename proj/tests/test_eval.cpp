// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "rbox/eval.hpp"

namespace rbox {
namespace {

RotatedRectd rect(double x, double y, double a, double h, double w) {
  return canonicalize(x, y, a, h, w);
}

Detection det(double x, double y, double score, double side = 10) {
  return {rect(x, y, 0, side, side), score};
}

TEST(MatchImage, CoincidentPair) {
  const std::vector<RotatedRectd> gts{rect(0, 0, 0.3, 10, 4)};
  const std::vector<Detection> dets{{gts[0], 0.9}};
  const auto m = match_image(dets, gts);
  EXPECT_EQ(m.true_positives(), 1u);
  EXPECT_EQ(m.false_positives(), 0u);
  EXPECT_EQ(m.false_negatives(), 0u);
  EXPECT_EQ(m.det_match[0], 0u);
  EXPECT_EQ(m.gt_match[0], 0u);
}

TEST(MatchImage, HighestOverlapWins) {
  // 10x10 squares offset along x by d have IoU (10-d)/(10+d).
  // IoU 0.9 -> d = 10/19, IoU 0.6 -> d = 2.5.
  const std::vector<RotatedRectd> gts{rect(0, 0, 0, 10, 10)};
  const std::vector<Detection> dets{det(2.5, 0, 0.95), det(10.0 / 19, 0, 0.5)};
  EXPECT_NEAR(exact_iou(dets[0].rect, gts[0]), 0.6, 1e-12);
  EXPECT_NEAR(exact_iou(dets[1].rect, gts[0]), 0.9, 1e-12);
  const auto m = match_image(dets, gts);
  EXPECT_EQ(m.det_match[1], 0u);
  EXPECT_FALSE(m.det_match[0]);
  EXPECT_EQ(m.false_positives(), 1u);
}

TEST(MatchImage, NoDetections) {
  const std::vector<RotatedRectd> gts{rect(0, 0, 0, 1, 1), rect(5, 5, 0, 1, 1)};
  const auto m = match_image({}, gts);
  EXPECT_EQ(m.false_negatives(), 2u);
  EXPECT_EQ(m.true_positives(), 0u);
}

TEST(MatchImage, StrictCut) {
  // IoU exactly 0.5: offset 10/3.
  const std::vector<RotatedRectd> gts{rect(0, 0, 0, 10, 10)};
  const std::vector<Detection> at_cut{det(10.0 / 3, 0, 0.9)};
  EXPECT_NEAR(exact_iou(at_cut[0].rect, gts[0]), 0.5, 1e-12);
  EXPECT_EQ(match_image(at_cut, gts, {0.49}).true_positives(), 1u);
  EXPECT_EQ(match_image(at_cut, gts, {0.51}).true_positives(), 0u);
}

TEST(MatchImage, DetectionMatchesAtMostOneGt) {
  const std::vector<RotatedRectd> gts{rect(0, 0, 0, 10, 10), rect(0.5, 0, 0, 10, 10)};
  const std::vector<Detection> dets{det(0.2, 0, 0.9)};
  const auto m = match_image(dets, gts);
  EXPECT_EQ(m.true_positives(), 1u);
  EXPECT_EQ(m.false_negatives(), 1u);
  EXPECT_EQ(m.det_match[0], 0u);  // IoU with gt 0 is higher
}

TEST(MatchImage, FastModeOption) {
  const std::vector<RotatedRectd> gts{rect(0, 0, 0.4, 20, 8)};
  const std::vector<Detection> dets{{rect(1, 0, 0.45, 20, 8), 0.7}};
  EvalOptions opts;
  opts.mode = IouMode::kFast;
  opts.n = 64;
  EXPECT_EQ(match_image(dets, gts, opts).true_positives(), 1u);
  opts.n = 0;
  EXPECT_THROW(match_image(dets, gts, opts), InvalidParameter);
}

TEST(PrCurve, PerfectDetector) {
  std::vector<ImageSample> images(2);
  images[0].gts = {rect(0, 0, 0, 10, 10), rect(50, 0, 0, 10, 10)};
  images[0].dets = {{images[0].gts[0], 0.9}, {images[0].gts[1], 0.8}};
  images[1].gts = {rect(0, 0, 1, 30, 10)};
  images[1].dets = {{images[1].gts[0], 0.5}};
  const auto c = pr_curve(images);
  EXPECT_EQ(c.ap, 1.0);
  for (const auto& p : c.points) EXPECT_EQ(p.precision, 1.0);
  EXPECT_EQ(c.points.back().recall, 1.0);
}

TEST(PrCurve, OneTpThenFp) {
  std::vector<ImageSample> images(1);
  images[0].gts = {rect(0, 0, 0, 10, 10)};
  images[0].dets = {det(0, 0, 0.9), det(300, 0, 0.8)};
  const auto c = pr_curve(images);
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_EQ(c.points[0], (PrPoint{1.0, 1.0}));
  EXPECT_EQ(c.points[1], (PrPoint{1.0, 0.5}));
  EXPECT_EQ(c.ap, 1.0);
}

TEST(PrCurve, MissedGtCapsRecall) {
  std::vector<ImageSample> images(1);
  images[0].gts = {rect(0, 0, 0, 10, 10), rect(100, 100, 0, 10, 10)};
  images[0].dets = {det(0, 0, 0.9), det(300, 0, 0.8)};
  const auto c = pr_curve(images);
  EXPECT_EQ(c.points.back().recall, 0.5);
  EXPECT_DOUBLE_EQ(c.ap, 0.5);
}

TEST(PrCurve, NoDetectionsGivesZero) {
  std::vector<ImageSample> images(1);
  images[0].gts = {rect(0, 0, 0, 10, 10)};
  const auto c = pr_curve(images);
  EXPECT_TRUE(c.points.empty());
  EXPECT_EQ(c.ap, 0.0);
}

TEST(PrCurve, NoGroundTruthIsAnError) {
  std::vector<ImageSample> images(1);
  images[0].dets = {det(0, 0, 0.9)};
  EXPECT_THROW(pr_curve(images), DataError);
  EXPECT_THROW(pr_curve(std::vector<ImageSample>{}), DataError);
}

TEST(AveragePrecision, EnvelopeByHand) {
  // precision 1 up to recall 0.25, then 0.4 at 0.5, then 0.6 at 0.75.
  // Envelope: 1 on (0, .25], 0.6 on (.25, .75].
  const std::vector<PrPoint> pts{{0.25, 1.0}, {0.5, 0.4}, {0.75, 0.6}};
  EXPECT_DOUBLE_EQ(average_precision(pts), 0.25 + 0.5 * 0.6);
  EXPECT_EQ(average_precision(std::vector<PrPoint>{}), 0.0);
}

std::vector<ImageSample> random_fixture(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_img(1, 3), n_gt(0, 3), n_det(0, 6);
  std::uniform_real_distribution<double> jitter(-4, 4), pos(0, 60), score(0, 1);
  std::uniform_int_distribution<int> coarse(0, 4);
  std::vector<ImageSample> images(static_cast<std::size_t>(n_img(rng)));
  std::size_t total_dets = 0;
  std::size_t total_gts = 0;
  for (auto& img : images) {
    const int g = n_gt(rng);
    for (int i = 0; i < g && total_gts < 3; ++i, ++total_gts) img.gts.push_back(oracle::random_rect(rng, 8, 25, pos(rng), pos(rng)));
    const int d = n_det(rng);
    for (int i = 0; i < d && total_dets < 6; ++i, ++total_dets) {
      // Mostly near a gt so matches happen; coarse scores create ties.
      const auto& anchor = img.gts.empty() ? oracle::random_rect(rng, 8, 25, 30, 30)
                                           : img.gts[static_cast<std::size_t>(i) % img.gts.size()];
      const auto r = oracle::random_rect(rng, 8, 25, anchor.x() + jitter(rng), anchor.y() + jitter(rng));
      img.dets.push_back({r, coarse(rng) == 0 ? 0.5 : score(rng)});
    }
  }
  if (std::all_of(images.begin(), images.end(), [](const auto& i) { return i.gts.empty(); })) {
    images[0].gts.push_back(rect(30, 30, 0, 15, 15));
  }
  return images;
}

TEST(PrCurve, MatchesBruteForceEnumeration) {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 500; ++trial) {
    const auto images = random_fixture(rng);
    std::vector<PrPoint> want_points;
    const double want = oracle::brute_force_ap(images, {}, &want_points);
    const auto got = pr_curve(images);
    ASSERT_EQ(got.points.size(), want_points.size());
    for (std::size_t k = 0; k < want_points.size(); ++k) {
      EXPECT_EQ(got.points[k], want_points[k]) << "trial " << trial << " prefix " << k;
    }
    EXPECT_NEAR(got.ap, want, 1e-12) << "trial " << trial;
  }
}

TEST(PrCurve, SweepInvariants) {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    const auto images = random_fixture(rng);
    const auto c = pr_curve(images);
    EXPECT_GE(c.ap, 0.0);
    EXPECT_LE(c.ap, 1.0);
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      EXPECT_GE(c.points[k].recall, 0.0);
      EXPECT_LE(c.points[k].recall, 1.0);
      EXPECT_GE(c.points[k].precision, 0.0);
      EXPECT_LE(c.points[k].precision, 1.0);
      if (k > 0) EXPECT_GE(c.points[k].recall, c.points[k - 1].recall);
    }
  }
}

TEST(PrCurve, InvariantUnderMonotoneScoreRescaling) {
  std::mt19937_64 rng(888);
  for (int trial = 0; trial < 100; ++trial) {
    auto images = random_fixture(rng);
    const double before = pr_curve(images).ap;
    for (auto& img : images) {
      for (auto& d : img.dets) d.score = d.score * d.score * 0.5 + 0.1;
    }
    EXPECT_EQ(pr_curve(images).ap, before);
  }
}

TEST(PrCurve, PerImageCountsBalance) {
  std::mt19937_64 rng(999);
  for (int trial = 0; trial < 100; ++trial) {
    const auto images = random_fixture(rng);
    for (const auto& img : images) {
      const auto m = match_image(img.dets, img.gts);
      EXPECT_EQ(m.true_positives() + m.false_negatives(), img.gts.size());
      EXPECT_EQ(m.true_positives() + m.false_positives(), img.dets.size());
      for (std::size_t d = 0; d < m.det_match.size(); ++d) {
        if (m.det_match[d]) EXPECT_EQ(m.gt_match[*m.det_match[d]], d);
      }
    }
  }
}

}  // namespace
}  // namespace rbox
