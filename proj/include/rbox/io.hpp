// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

// Line-oriented text formats.
//
//   # image <id>
//   x,y,alpha,h,w            (annotation rows)
//   x,y,alpha,h,w,score      (detection rows)
//
// Blank lines and other lines starting with '#' are ignored. Angles are in
// radians unless the caller selects AngleUnit::kDegrees. Rows are
// canonicalized on read.

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbox/anchors.hpp"
#include "rbox/eval.hpp"
#include "rbox/postprocess.hpp"

namespace rbox::io {

enum class AngleUnit { kRadians, kDegrees };

struct AnnotationImage {
  std::string id;
  std::vector<RotatedRectd> boxes;

  friend bool operator==(const AnnotationImage&, const AnnotationImage&) = default;
};

struct DetectionImage {
  std::string id;
  std::vector<Detection> dets;

  friend bool operator==(const DetectionImage&, const DetectionImage&) = default;
};

/// Shortest round-trip decimal form, always with a fractional part or
/// exponent ("8.0", "0.1", "2.0943951023931953", "1e+300").
std::string format_number(double v);

/// Parses "x,y,alpha,h,w" (optionally followed by more fields when
/// `fields` > 5). Throws ParseError on malformed text.
std::vector<double> parse_fields(std::string_view text, std::size_t fields,
                                 std::size_t line = 0);

/// Rect from "x,y,alpha,h,w"; ParseError for bad text, InvalidRect for bad
/// geometry.
RotatedRectd parse_rect(std::string_view text, AngleUnit unit = AngleUnit::kRadians);

std::vector<AnnotationImage> read_annotations(std::istream& in,
                                              AngleUnit unit = AngleUnit::kRadians);
std::vector<DetectionImage> read_detections(std::istream& in,
                                            AngleUnit unit = AngleUnit::kRadians);

void write_rect(std::ostream& out, const RotatedRectd& r,
                AngleUnit unit = AngleUnit::kRadians);
void write_annotations(std::ostream& out, std::span<const AnnotationImage> images,
                       AngleUnit unit = AngleUnit::kRadians);
void write_detections(std::ostream& out, std::span<const DetectionImage> images,
                      AngleUnit unit = AngleUnit::kRadians);

/// Flat "key = value" anchor configuration. Required keys: feat_width,
/// feat_height, stride, scales, angles; optional: aspect. List values are
/// comma separated. Throws ConfigError.
AnchorGridConfig read_anchor_config(std::istream& in,
                                    AngleUnit unit = AngleUnit::kRadians);

/// "recall,precision" header followed by one row per curve point.
void write_curve_csv(std::ostream& out, const PrCurve& curve);

/// Pairs annotation and detection images by id, in annotation order. Throws
/// DataError listing every id present on only one side.
std::vector<ImageSample> join_by_id(std::span<const AnnotationImage> gts,
                                    std::span<const DetectionImage> dets);

}  // namespace rbox::io
