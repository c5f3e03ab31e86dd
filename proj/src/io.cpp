// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#include "rbox/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>

namespace rbox::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

double to_radians(double a, AngleUnit unit) {
  return unit == AngleUnit::kDegrees ? deg_to_rad(a) : a;
}

double from_radians(double a, AngleUnit unit) {
  return unit == AngleUnit::kDegrees ? rad_to_deg(a) : a;
}

constexpr std::string_view kImageTag = "# image";

/// Returns the image id when `line` is a grouping header.
std::optional<std::string> image_header(std::string_view line) {
  if (!line.starts_with(kImageTag)) return std::nullopt;
  const std::string_view rest = line.substr(kImageTag.size());
  if (!rest.empty() && rest.front() != ' ' && rest.front() != '\t') return std::nullopt;
  return std::string(trim(rest));
}

/// Drives the shared group/row structure of both data formats. `on_row`
/// receives the current group index, the row text and the line number.
template <typename OnGroup, typename OnRow>
void read_grouped(std::istream& in, OnGroup on_group, OnRow on_row) {
  std::string raw;
  std::size_t line_no = 0;
  bool in_group = false;
  std::set<std::string> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (auto id = image_header(line)) {
      if (id->empty()) throw ParseError("image header without an id", line_no);
      if (!seen.insert(*id).second) {
        throw ParseError("duplicate image id '" + *id + "'", line_no);
      }
      on_group(std::move(*id));
      in_group = true;
      continue;
    }
    if (line.front() == '#') continue;
    if (!in_group) throw ParseError("data row before any '# image' header", line_no);
    on_row(line, line_no);
  }
}

RotatedRectd rect_from_fields(const std::vector<double>& f, AngleUnit unit,
                              std::size_t line_no) {
  try {
    return canonicalize(f[0], f[1], to_radians(f[2], unit), f[3], f[4]);
  } catch (const InvalidRect& e) {
    if (line_no == 0) throw;
    throw InvalidRect("line " + std::to_string(line_no) + ": " + e.what());
  }
}

std::vector<double> parse_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (auto tok : split(value, ',')) {
    const auto v = to_double(tok);
    if (!v) {
      throw ConfigError("key '" + std::string(key) + "': '" + std::string(tok) +
                        "' is not a number");
    }
    out.push_back(*v);
  }
  return out;
}

double parse_scalar(std::string_view key, std::string_view value) {
  const auto list = parse_list(key, value);
  if (list.size() != 1) {
    throw ConfigError("key '" + std::string(key) + "' takes a single value");
  }
  return list.front();
}

int parse_count(std::string_view key, std::string_view value) {
  const double v = parse_scalar(key, value);
  if (v != std::floor(v) || v < 1 || v > 1e6) {
    throw ConfigError("key '" + std::string(key) + "' must be a positive integer");
  }
  return static_cast<int>(v);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ec == std::errc() ? ptr : buf);
  if (std::isfinite(v) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::vector<double> parse_fields(std::string_view text, std::size_t fields,
                                 std::size_t line) {
  const auto parts = split(trim(text), ',');
  if (parts.size() != fields) {
    throw ParseError("expected " + std::to_string(fields) + " comma-separated fields, got " +
                         std::to_string(parts.size()),
                     line);
  }
  std::vector<double> out;
  out.reserve(fields);
  for (auto p : parts) {
    const auto v = to_double(p);
    if (!v) throw ParseError("'" + std::string(p) + "' is not a number", line);
    out.push_back(*v);
  }
  return out;
}

RotatedRectd parse_rect(std::string_view text, AngleUnit unit) {
  return rect_from_fields(parse_fields(text, 5), unit, 0);
}

std::vector<AnnotationImage> read_annotations(std::istream& in, AngleUnit unit) {
  std::vector<AnnotationImage> images;
  read_grouped(
      in, [&](std::string id) { images.push_back({std::move(id), {}}); },
      [&](std::string_view row, std::size_t line_no) {
        images.back().boxes.push_back(
            rect_from_fields(parse_fields(row, 5, line_no), unit, line_no));
      });
  return images;
}

std::vector<DetectionImage> read_detections(std::istream& in, AngleUnit unit) {
  std::vector<DetectionImage> images;
  read_grouped(
      in, [&](std::string id) { images.push_back({std::move(id), {}}); },
      [&](std::string_view row, std::size_t line_no) {
        const auto f = parse_fields(row, 6, line_no);
        if (!std::isfinite(f[5]) || f[5] < 0 || f[5] > 1) {
          throw DataError("line " + std::to_string(line_no) +
                          ": score must lie in [0, 1]");
        }
        images.back().dets.push_back({rect_from_fields(f, unit, line_no), f[5]});
      });
  return images;
}

void write_rect(std::ostream& out, const RotatedRectd& r, AngleUnit unit) {
  out << format_number(r.x()) << ',' << format_number(r.y()) << ','
      << format_number(from_radians(r.alpha(), unit)) << ',' << format_number(r.h())
      << ',' << format_number(r.w());
}

void write_annotations(std::ostream& out, std::span<const AnnotationImage> images,
                       AngleUnit unit) {
  for (const auto& img : images) {
    out << kImageTag << ' ' << img.id << '\n';
    for (const auto& r : img.boxes) {
      write_rect(out, r, unit);
      out << '\n';
    }
  }
}

void write_detections(std::ostream& out, std::span<const DetectionImage> images,
                      AngleUnit unit) {
  for (const auto& img : images) {
    out << kImageTag << ' ' << img.id << '\n';
    for (const auto& d : img.dets) {
      write_rect(out, d.rect, unit);
      out << ',' << format_number(d.score) << '\n';
    }
  }
}

AnchorGridConfig read_anchor_config(std::istream& in, AngleUnit unit) {
  std::map<std::string, std::string, std::less<>> kv;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!kv.emplace(key, std::string(trim(line.substr(eq + 1)))).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }

  static const std::set<std::string, std::less<>> kKnown = {
      "feat_width", "feat_height", "stride", "scales", "angles", "aspect"};
  for (const auto& [key, value] : kv) {
    if (!kKnown.contains(key)) throw ConfigError("unknown key '" + key + "'");
  }
  auto require = [&](std::string_view key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("missing key '" + std::string(key) + "'");
    return it->second;
  };

  AnchorGridConfig cfg;
  cfg.feat_width = parse_count("feat_width", require("feat_width"));
  cfg.feat_height = parse_count("feat_height", require("feat_height"));
  cfg.stride = parse_scalar("stride", require("stride"));
  cfg.scales = parse_list("scales", require("scales"));
  cfg.angles = parse_list("angles", require("angles"));
  for (double& a : cfg.angles) a = to_radians(a, unit);
  if (const auto it = kv.find("aspect"); it != kv.end()) {
    cfg.aspect = parse_scalar("aspect", it->second);
  }
  cfg.validate();
  return cfg;
}

void write_curve_csv(std::ostream& out, const PrCurve& curve) {
  out << "recall,precision\n";
  for (const auto& p : curve.points) {
    out << format_number(p.recall) << ',' << format_number(p.precision) << '\n';
  }
}

std::vector<ImageSample> join_by_id(std::span<const AnnotationImage> gts,
                                    std::span<const DetectionImage> dets) {
  std::map<std::string, const DetectionImage*, std::less<>> by_id;
  for (const auto& d : dets) by_id.emplace(d.id, &d);

  std::vector<ImageSample> out;
  std::set<std::string, std::less<>> gt_ids;
  std::vector<std::string> orphans;
  for (const auto& g : gts) {
    gt_ids.insert(g.id);
    const auto it = by_id.find(g.id);
    if (it == by_id.end()) {
      orphans.push_back(g.id + " (annotations only)");
      continue;
    }
    out.push_back({it->second->dets, g.boxes});
  }
  for (const auto& d : dets) {
    if (!gt_ids.contains(d.id)) orphans.push_back(d.id + " (detections only)");
  }
  if (!orphans.empty()) {
    std::string msg = "image ids do not match:";
    for (const auto& o : orphans) msg += "\n  " + o;
    throw DataError(msg);
  }
  return out;
}

}  // namespace rbox::io
