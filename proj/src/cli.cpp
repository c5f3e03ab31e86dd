// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbox/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "rbox/anchors.hpp"
#include "rbox/convergence.hpp"
#include "rbox/eval.hpp"
#include "rbox/io.hpp"
#include "rbox/postprocess.hpp"

namespace rbox::cli {

namespace {

/// Unreadable or unwritable paths are usage errors.
class PathError : public Error {
 public:
  using Error::Error;
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PathError("cannot open '" + path + "' for reading");
  return in;
}

/// Writes to `path` when given, otherwise to `fallback`.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw PathError("cannot open '" + path + "' for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

io::AngleUnit unit_of(bool degrees) {
  return degrees ? io::AngleUnit::kDegrees : io::AngleUnit::kRadians;
}

struct IouArgs {
  std::string rect1, rect2;
  int n = kDefaultEvalGrid;
  bool exact = false;
  bool degrees = false;
};

int cmd_iou(const IouArgs& a, std::ostream& out) {
  const auto unit = unit_of(a.degrees);
  const RotatedRectd r1 = io::parse_rect(a.rect1, unit);
  const RotatedRectd r2 = io::parse_rect(a.rect2, unit);
  const double v = a.exact ? exact_iou(r1, r2) : fast_iou(r1, r2, a.n);
  out << fixed6(v) << '\n';
  return kOk;
}

struct AnchorsArgs {
  std::string config;
  std::string out;
  bool degrees = false;
};

int cmd_anchors(const AnchorsArgs& a, std::ostream& out) {
  auto in = open_input(a.config);
  const AnchorGridConfig cfg = io::read_anchor_config(in, unit_of(a.degrees));
  const auto anchors = generate_anchors(cfg);
  OutputTarget target(a.out, out);
  for (const auto& r : anchors) {
    io::write_rect(target.stream(), r, unit_of(a.degrees));
    target.stream() << '\n';
  }
  return kOk;
}

struct NmsArgs {
  std::string detections;
  std::string out;
  double thresh = 0.5;
  int n = kDefaultNmsGrid;
  bool degrees = false;
};

int cmd_nms(const NmsArgs& a, std::ostream& out) {
  auto in = open_input(a.detections);
  auto images = io::read_detections(in, unit_of(a.degrees));
  for (auto& img : images) img.dets = nms(img.dets, a.thresh, a.n);
  OutputTarget target(a.out, out);
  io::write_detections(target.stream(), images, unit_of(a.degrees));
  return kOk;
}

struct EvalArgs {
  std::string annotations;
  std::string detections;
  std::string curve_out;
  double iou_cut = 0.5;
  bool fast = false;
  int n = kDefaultEvalGrid;
  bool degrees = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  auto gt_in = open_input(a.annotations);
  auto det_in = open_input(a.detections);
  const auto gts = io::read_annotations(gt_in, unit_of(a.degrees));
  const auto dets = io::read_detections(det_in, unit_of(a.degrees));
  const auto samples = io::join_by_id(gts, dets);

  EvalOptions opts;
  opts.iou_cut = a.iou_cut;
  opts.mode = a.fast ? IouMode::kFast : IouMode::kExact;
  opts.n = a.n;
  const PrCurve curve = pr_curve(samples, opts);

  if (!a.curve_out.empty()) {
    OutputTarget target(a.curve_out, out);
    io::write_curve_csv(target.stream(), curve);
  }
  out << "AP = " << fixed6(curve.ap) << '\n';
  return kOk;
}

struct ConvergeArgs {
  std::size_t trials = 1000;
  std::vector<int> n_list{16, 32, 64, 128};
  std::uint64_t seed = 0;
};

int cmd_converge(const ConvergeArgs& a, std::ostream& out) {
  const auto pairs = random_rect_pairs(a.trials, a.seed);
  out << "n,mean_abs_err,max_abs_err\n";
  for (const auto& row : convergence_table(pairs, a.n_list)) {
    out << row.n << ',' << fixed6(row.mean_abs_err) << ',' << fixed6(row.max_abs_err)
        << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oriented bounding box toolkit: IoU, anchors, NMS and evaluation"};
  app.name(args.empty() ? "rbox" : args.front());
  app.require_subcommand(1);

  IouArgs iou_args;
  auto* iou = app.add_subcommand("iou", "IoU of two rectangles given as x,y,alpha,h,w");
  iou->add_option("rect1", iou_args.rect1, "first rectangle (grid-sampled in fast mode)")
      ->required();
  iou->add_option("rect2", iou_args.rect2, "second rectangle")->required();
  iou->add_option("--n", iou_args.n, "grid side count for the fast estimate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  iou->add_flag("--exact", iou_args.exact, "use exact polygon clipping");
  iou->add_flag("--degrees", iou_args.degrees, "angles are in degrees");

  AnchorsArgs anchors_args;
  auto* anchors = app.add_subcommand("anchors", "dump the anchor field of a config file");
  anchors->add_option("config", anchors_args.config, "anchor config file")->required();
  anchors->add_option("--out", anchors_args.out, "output file (default: stdout)");
  anchors->add_flag("--degrees", anchors_args.degrees, "angles are in degrees");

  NmsArgs nms_args;
  auto* nms_cmd = app.add_subcommand("nms", "per-image rotated non-maximum suppression");
  nms_cmd->add_option("detections", nms_args.detections, "detection file")->required();
  nms_cmd->add_option("--thresh", nms_args.thresh, "suppression IoU threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  nms_cmd->add_option("--n", nms_args.n, "grid side count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  nms_cmd->add_option("--out", nms_args.out, "output file (default: stdout)");
  nms_cmd->add_flag("--degrees", nms_args.degrees, "angles are in degrees");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "average precision of detections");
  eval->add_option("annotations", eval_args.annotations, "annotation file")->required();
  eval->add_option("detections", eval_args.detections, "detection file")->required();
  eval->add_option("--iou-cut", eval_args.iou_cut, "match when IoU exceeds this value")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  eval->add_option("--curve-out", eval_args.curve_out, "write recall,precision CSV here");
  eval->add_flag("--fast", eval_args.fast, "match with the grid estimate instead");
  eval->add_option("--n", eval_args.n, "grid side count for --fast")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval->add_flag("--degrees", eval_args.degrees, "angles are in degrees");

  ConvergeArgs conv_args;
  auto* converge =
      app.add_subcommand("converge", "grid-estimate error against exact IoU per grid size");
  converge->add_option("--trials", conv_args.trials, "number of random pairs")
      ->capture_default_str();
  converge->add_option("--n-list", conv_args.n_list, "comma-separated grid sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  converge->add_option("--seed", conv_args.seed, "random seed")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("rbox");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (*iou) return cmd_iou(iou_args, out);
    if (*anchors) return cmd_anchors(anchors_args, out);
    if (*nms_cmd) return cmd_nms(nms_args, out);
    if (*eval) return cmd_eval(eval_args, out);
    if (*converge) return cmd_converge(conv_args, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const PathError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace rbox::cli
