// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "cli_fixtures.hpp"

namespace rbox {
namespace {

using testing::run_cli;
using testing::ScratchDir;

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::size_t count_rows(const std::string& s) {
  std::istringstream in(s);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) rows += !line.empty() && line.front() != '#';
  return rows;
}

TEST(CliIou, IdenticalFast) {
  const auto r = run_cli({"iou", "0,0,0,10,10", "0,0,0,10,10"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1.000000\n");
}

TEST(CliIou, ExactDegrees) {
  const auto r = run_cli({"iou", "--exact", "0,0,0,1,1", "0,0,45,1,1", "--degrees"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.707107\n");
}

TEST(CliIou, FastWithGridOption) {
  const auto r = run_cli({"iou", "--n", "128", "0,0,0,10,10", "5,0,0,10,10"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.333333\n");
}

TEST(CliIou, ParseErrors) {
  auto r = run_cli({"iou", "a,b,c"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());

  r = run_cli({"iou", "a,b,c,d,e", "0,0,0,1,1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("not a number"), std::string::npos);

  r = run_cli({"iou", "0,0,0,-1,1", "0,0,0,1,1"});
  EXPECT_EQ(r.code, 2);

  r = run_cli({"iou", "--n", "0", "0,0,0,1,1", "0,0,0,1,1"});
  EXPECT_EQ(r.code, 1);
}

TEST(CliUsage, NoSubcommandAndHelp) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"bogus"}).code, 1);
  const auto help = run_cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("converge"), std::string::npos);
}

TEST(CliAnchors, SingleCell) {
  ScratchDir dir("cli_anchors");
  const auto cfg = dir.write("one.cfg", testing::kSingleCellConfig);
  const auto r = run_cli({"anchors", cfg});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "8.0,8.0,0.0,64.0,64.0\n");
}

TEST(CliAnchors, AgConfigToFile) {
  ScratchDir dir("cli_anchors_ag");
  const auto cfg = dir.write("ag.cfg", testing::kAgConfig);
  const auto out = dir.path("anchors.csv");
  const auto r = run_cli({"anchors", cfg, "--degrees", "--out", out});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(count_lines(ScratchDir::read(out)), 7056u);

  // Radians: -60 degrees written as -pi/3 canonicalizes to 2pi/3.
  const auto rad_cfg = dir.write(
      "ag_rad.cfg",
      "feat_width = 28\nfeat_height = 28\nstride = 16\nscales = 3600, 8100, 16900\n"
      "angles = -1.0471975511965976, 0, 1.0471975511965976\n");
  const auto rad = run_cli({"anchors", rad_cfg});
  EXPECT_EQ(rad.code, 0);
  EXPECT_EQ(count_lines(rad.out), 7056u);
  EXPECT_EQ(rad.out.substr(0, rad.out.find('\n')), "8.0,8.0,2.0943951023931957,60.0,60.0");
}

TEST(CliAnchors, MissingScales) {
  ScratchDir dir("cli_anchors_bad");
  const auto cfg = dir.write("bad.cfg", "feat_width = 1\nfeat_height = 1\nstride = 16\nangles = 0\n");
  const auto r = run_cli({"anchors", cfg});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing key 'scales'"), std::string::npos);
  EXPECT_EQ(run_cli({"anchors", dir.path("absent.cfg")}).code, 1);
}

TEST(CliNms, Examples) {
  ScratchDir dir("cli_nms");
  auto r = run_cli({"nms", dir.write("same.txt", testing::kIdenticalPair), "--thresh", "0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "# image 0\n0.0,0.0,0.0,10.0,10.0,0.9\n");

  r = run_cli({"nms", dir.write("apart.txt", testing::kDisjointPair), "--thresh", "0.5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "# image 0\n100.0,0.0,0.0,10.0,10.0,0.6\n0.0,0.0,0.0,10.0,10.0,0.3\n");

  r = run_cli({"nms", dir.write("three.txt", testing::kThreeSquares), "--thresh", "0.3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(count_rows(r.out), 2u);
  EXPECT_EQ(r.out,
            "# image 0\n0.0,0.0,0.0,10.0,10.0,0.9\n10.0,0.0,0.0,10.0,10.0,0.7\n");
}

TEST(CliNms, PreservesGroupingAndWritesFile) {
  ScratchDir dir("cli_nms_groups");
  const auto in = dir.write(
      "multi.txt", std::string(testing::kIdenticalPair) + "# image empty\n" +
                       "# image 2\n0.0,0.0,0.0,10.0,10.0,0.5\n");
  const auto out = dir.path("kept.txt");
  const auto r = run_cli({"nms", in, "--out", out});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(ScratchDir::read(out),
            "# image 0\n0.0,0.0,0.0,10.0,10.0,0.9\n# image empty\n# image 2\n"
            "0.0,0.0,0.0,10.0,10.0,0.5\n");
}

TEST(CliNms, MalformedLine) {
  ScratchDir dir("cli_nms_bad");
  const auto r = run_cli({"nms", dir.write("bad.txt", "# image 0\n0,0,0,1,1,0.5\n0,0,0,1\n")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST(CliEval, PerfectMatch) {
  ScratchDir dir("cli_eval");
  const auto r = run_cli({"eval", dir.write("gt.txt", testing::kPerfectGt),
                          dir.write("det.txt", testing::kPerfectDet)});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "AP = 1.000000\n");
}

TEST(CliEval, HandCaseWithCurve) {
  ScratchDir dir("cli_eval_hand");
  const auto curve = dir.path("pr.csv");
  const auto r = run_cli({"eval", dir.write("gt.txt", testing::kHandGt),
                          dir.write("det.txt", testing::kHandDet), "--curve-out", curve});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "AP = 0.500000\n");
  EXPECT_EQ(ScratchDir::read(curve), "recall,precision\n0.5,1.0\n0.5,0.5\n");
}

TEST(CliEval, FastModeAndCut) {
  ScratchDir dir("cli_eval_fast");
  const auto r = run_cli({"eval", dir.write("gt.txt", testing::kPerfectGt),
                          dir.write("det.txt", testing::kPerfectDet), "--fast", "--n", "64",
                          "--iou-cut", "0.7"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "AP = 1.000000\n");
}

TEST(CliEval, Errors) {
  ScratchDir dir("cli_eval_err");
  const auto det = dir.write("det.txt", testing::kPerfectDet);
  auto r = run_cli({"eval", dir.write("empty.txt", ""), det});
  EXPECT_EQ(r.code, 2);

  r = run_cli({"eval", dir.write("nogt.txt", "# image a\n# image b\n"), det});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no ground-truth"), std::string::npos);

  r = run_cli({"eval", dir.write("other.txt", "# image a\n0,0,0,1,1\n# image q\n"), det});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("q (annotations only)"), std::string::npos);
  EXPECT_NE(r.err.find("b (detections only)"), std::string::npos);
}

TEST(CliConverge, TableShape) {
  const auto r = run_cli({"converge", "--trials", "200", "--n-list", "64,16,64,32", "--seed", "3"});
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "n,mean_abs_err,max_abs_err");
  EXPECT_EQ(lines[1].substr(0, 3), "16,");
  EXPECT_EQ(lines[2].substr(0, 3), "32,");
  EXPECT_EQ(lines[3].substr(0, 3), "64,");
}

TEST(CliConverge, DefaultsMeetTarget) {
  const auto r = run_cli({"converge"});
  EXPECT_EQ(r.code, 0);
  const auto pos = r.out.find("\n128,");
  ASSERT_NE(pos, std::string::npos);
  const double mean = std::stod(r.out.substr(pos + 5));
  EXPECT_LT(mean, 0.01);
}

TEST(CliConverge, ZeroTrialsAndDeterminism) {
  const auto empty = run_cli({"converge", "--trials", "0"});
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(empty.out, "n,mean_abs_err,max_abs_err\n");
  EXPECT_EQ(run_cli({"converge", "--trials", "50", "--seed", "9"}).out,
            run_cli({"converge", "--trials", "50", "--seed", "9"}).out);
}

}  // namespace
}  // namespace rbox
