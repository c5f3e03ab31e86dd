// Copyright 2026 The rbox Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rbox/errors.hpp"

namespace rbox {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// Counter-clockwise rotation by `angle` radians (y-up convention).
template <typename Scalar>
Matrix2<Scalar> rotation(Scalar angle) {
  const Scalar c = std::cos(angle);
  const Scalar s = std::sin(angle);
  Matrix2<Scalar> m;
  m << c, -s, s, c;
  return m;
}

template <typename Scalar>
constexpr Scalar deg_to_rad(Scalar deg) {
  return deg * std::numbers::pi_v<Scalar> / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad_to_deg(Scalar rad) {
  return rad * Scalar(180) / std::numbers::pi_v<Scalar>;
}

/// Oriented rectangle (x, y, alpha, h, w) in canonical form.
///
/// `h` is the longer side and `w` the shorter one; `alpha` is the angle
/// between the short side and the x axis, reduced into [0, pi). At
/// alpha = 0 the w-side runs along x and the h-side along y. Instances can
/// only be obtained through canonicalize(), so every live value satisfies
/// the invariants.
template <typename Scalar>
class RotatedRect {
 public:
  using Vector = Vector2<Scalar>;
  using Corners = Eigen::Matrix<Scalar, 2, 4>;

  /// Reduces any finite parameterization with positive sides to canonical
  /// form. Throws InvalidRect otherwise.
  static RotatedRect canonicalize(Scalar x, Scalar y, Scalar alpha, Scalar h,
                                  Scalar w) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(alpha) ||
        !std::isfinite(h) || !std::isfinite(w)) {
      throw InvalidRect("rectangle has a nonfinite field");
    }
    if (!(h > 0) || !(w > 0)) {
      throw InvalidRect("rectangle sides must be positive");
    }
    constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
    if (h < w) {
      std::swap(h, w);
      alpha += kPi / 2;
    }
    alpha = std::fmod(alpha, kPi);
    if (alpha < 0) alpha += kPi;
    // fmod of a tiny negative can round up to exactly pi.
    if (alpha >= kPi) alpha = 0;
    return RotatedRect(x, y, alpha, h, w);
  }

  Scalar x() const noexcept { return x_; }
  Scalar y() const noexcept { return y_; }
  Scalar alpha() const noexcept { return alpha_; }
  Scalar h() const noexcept { return h_; }
  Scalar w() const noexcept { return w_; }

  Vector center() const { return Vector(x_, y_); }
  Scalar area() const noexcept { return h_ * w_; }

  /// Radius of the circumscribed circle.
  Scalar radius() const { return Scalar(0.5) * std::hypot(h_, w_); }

  /// Corner polygon, counter-clockwise.
  Corners corners() const {
    Corners unit;
    unit << -0.5, 0.5, 0.5, -0.5,  //
        -0.5, -0.5, 0.5, 0.5;
    const Corners local = rotation(alpha_) * Vector(w_, h_).asDiagonal() * unit;
    return local.colwise() + center();
  }

  friend bool operator==(const RotatedRect&, const RotatedRect&) = default;

 private:
  RotatedRect(Scalar x, Scalar y, Scalar alpha, Scalar h, Scalar w)
      : x_(x), y_(y), alpha_(alpha), h_(h), w_(w) {}

  Scalar x_, y_, alpha_, h_, w_;
};

using RotatedRectd = RotatedRect<double>;
using RotatedRectf = RotatedRect<float>;

template <typename Scalar>
RotatedRect<Scalar> canonicalize(Scalar x, Scalar y, Scalar alpha, Scalar h,
                                 Scalar w) {
  return RotatedRect<Scalar>::canonicalize(x, y, alpha, h, w);
}

/// n x n sampling lattice over [-0.5, 0.5]^2, one point per cell center.
template <typename Scalar>
class PointGrid {
 public:
  using Points = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

  explicit PointGrid(int n) : n_(n) {
    if (n < 1) throw InvalidParameter("grid size must be at least 1");
    points_.resize(2, static_cast<Eigen::Index>(n) * n);
    Eigen::Index col = 0;
    for (int i = 0; i < n; ++i) {
      const Scalar u = (Scalar(i) + Scalar(0.5)) / Scalar(n) - Scalar(0.5);
      for (int j = 0; j < n; ++j) {
        const Scalar v = (Scalar(j) + Scalar(0.5)) / Scalar(n) - Scalar(0.5);
        points_(0, col) = u;
        points_(1, col) = v;
        ++col;
      }
    }
  }

  int n() const noexcept { return n_; }
  Eigen::Index size() const noexcept { return points_.cols(); }
  const Points& points() const noexcept { return points_; }

 private:
  int n_;
  Points points_;
};

template <typename Scalar = double>
PointGrid<Scalar> make_grid(int n) {
  return PointGrid<Scalar>(n);
}

namespace detail {

template <typename Scalar>
bool circles_disjoint(const RotatedRect<Scalar>& a,
                      const RotatedRect<Scalar>& b) {
  return (a.center() - b.center()).norm() > a.radius() + b.radius();
}

template <typename Scalar>
Scalar overlap_ratio(Scalar inter, Scalar area_a, Scalar area_b) {
  const Scalar uni = area_a + area_b - inter;
  if (!(uni > 0)) return 0;
  return std::clamp(inter / uni, Scalar(0), Scalar(1));
}

}  // namespace detail

/// Grid-sampling IoU estimate. The grid is mapped into `r1`, then both the
/// mapped points and `r2` are rotated by -alpha2 so that `r2` becomes axis
/// aligned and containment is two interval tests. Points on the boundary of
/// `r2` count as inside. Not symmetric: `r1` is the sampled rectangle.
template <typename Scalar>
Scalar fast_iou(const RotatedRect<Scalar>& r1, const RotatedRect<Scalar>& r2,
                const PointGrid<Scalar>& grid) {
  if (detail::circles_disjoint(r1, r2)) return 0;

  const Eigen::Matrix<Scalar, 2, Eigen::Dynamic> mapped =
      ((rotation(r1.alpha()) * Vector2<Scalar>(r1.w(), r1.h()).asDiagonal()) *
       grid.points())
          .colwise() +
      r1.center();

  const Matrix2<Scalar> unrotate = rotation(-r2.alpha());
  const Vector2<Scalar> uv = unrotate * r2.center();
  const Eigen::Matrix<Scalar, 2, Eigen::Dynamic> aligned = unrotate * mapped;

  const Scalar half_w = r2.w() / 2;
  const Scalar half_h = r2.h() / 2;
  const Eigen::Index inside =
      (((aligned.row(0).array() - uv.x()).abs() <= half_w) &&
       ((aligned.row(1).array() - uv.y()).abs() <= half_h))
          .count();

  const Scalar inter =
      r1.area() * Scalar(inside) / Scalar(grid.size());
  return detail::overlap_ratio(inter, r1.area(), r2.area());
}

template <typename Scalar>
Scalar fast_iou(const RotatedRect<Scalar>& r1, const RotatedRect<Scalar>& r2,
                int n) {
  return fast_iou(r1, r2, PointGrid<Scalar>(n));
}

namespace detail {

/// Convex polygon with at most 8 vertices (a quad clipped by 4 half-planes).
template <typename Scalar>
struct SmallPolygon {
  std::array<Vector2<Scalar>, 12> v;
  std::size_t size = 0;

  void push(const Vector2<Scalar>& p) { v[size++] = p; }
};

/// Keeps the part of `in` with sign * p[axis] <= limit.
template <typename Scalar>
SmallPolygon<Scalar> clip_half_plane(const SmallPolygon<Scalar>& in, int axis,
                                     Scalar sign, Scalar limit) {
  SmallPolygon<Scalar> out;
  if (in.size == 0) return out;
  auto inside = [&](const Vector2<Scalar>& p) {
    return sign * p[axis] <= limit;
  };
  for (std::size_t i = 0; i < in.size; ++i) {
    const Vector2<Scalar>& cur = in.v[i];
    const Vector2<Scalar>& prev = in.v[(i + in.size - 1) % in.size];
    const bool cur_in = inside(cur);
    const bool prev_in = inside(prev);
    if (cur_in != prev_in) {
      const Scalar t =
          (limit - sign * prev[axis]) / (sign * cur[axis] - sign * prev[axis]);
      Vector2<Scalar> hit = prev + t * (cur - prev);
      hit[axis] = sign * limit;
      out.push(hit);
    }
    if (cur_in) out.push(cur);
  }
  return out;
}

template <typename Scalar>
Scalar shoelace_area(const SmallPolygon<Scalar>& poly) {
  if (poly.size < 3) return 0;
  Scalar twice = 0;
  for (std::size_t i = 0; i < poly.size; ++i) {
    const auto& p = poly.v[i];
    const auto& q = poly.v[(i + 1) % poly.size];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return std::abs(twice) / 2;
}

}  // namespace detail

/// Area of the intersection of two rectangles by clipping `r1`'s corner
/// polygon against the four half-planes of `r2`, in `r2`'s own frame.
template <typename Scalar>
Scalar intersection_area(const RotatedRect<Scalar>& r1,
                         const RotatedRect<Scalar>& r2) {
  if (detail::circles_disjoint(r1, r2)) return 0;

  const Matrix2<Scalar> unrotate = rotation(-r2.alpha());
  const Eigen::Matrix<Scalar, 2, 4> local =
      unrotate * (r1.corners().colwise() - r2.center());

  detail::SmallPolygon<Scalar> poly;
  for (int i = 0; i < 4; ++i) poly.push(local.col(i));

  const Scalar half_w = r2.w() / 2;
  const Scalar half_h = r2.h() / 2;
  poly = detail::clip_half_plane(poly, 0, Scalar(1), half_w);
  poly = detail::clip_half_plane(poly, 0, Scalar(-1), half_w);
  poly = detail::clip_half_plane(poly, 1, Scalar(1), half_h);
  poly = detail::clip_half_plane(poly, 1, Scalar(-1), half_h);

  const Scalar area = detail::shoelace_area(poly);
  return area < Scalar(1e-12) ? Scalar(0) : area;
}

/// Exact IoU via convex clipping and the shoelace formula.
template <typename Scalar>
Scalar exact_iou(const RotatedRect<Scalar>& r1, const RotatedRect<Scalar>& r2) {
  const Scalar inter = intersection_area(r1, r2);
  return detail::overlap_ratio(inter, r1.area(), r2.area());
}

enum class IouMode { kFast, kExact };

template <typename Scalar>
using IoUMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// All-pairs IoU, values(i, j) = iou(a[i], b[j]). In fast mode a[i] is the
/// sampled rectangle. Rows are split across `threads` workers (0 picks the
/// hardware concurrency); every entry is computed by the same scalar routine
/// so the result does not depend on the partition.
template <typename Scalar>
IoUMatrix<Scalar> iou_matrix(std::span<const RotatedRect<Scalar>> a,
                             std::span<const RotatedRect<Scalar>> b,
                             IouMode mode, int n, unsigned threads = 0) {
  if (mode == IouMode::kFast && n < 1) {
    throw InvalidParameter("grid size must be at least 1");
  }
  const auto rows = static_cast<Eigen::Index>(a.size());
  const auto cols = static_cast<Eigen::Index>(b.size());
  IoUMatrix<Scalar> out(rows, cols);
  if (rows == 0 || cols == 0) return out;

  const PointGrid<Scalar> grid(mode == IouMode::kFast ? n : 1);
  auto fill_rows = [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index i = begin; i < end; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        out(i, j) = mode == IouMode::kFast
                        ? fast_iou(a[i], b[j], grid)
                        : exact_iou(a[i], b[j]);
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  constexpr Eigen::Index kMinPairsPerWorker = 256;
  const Eigen::Index by_work = std::max<Eigen::Index>(1, rows * cols / kMinPairsPerWorker);
  const auto workers = static_cast<Eigen::Index>(
      std::min<Eigen::Index>({static_cast<Eigen::Index>(threads), rows, by_work}));
  if (workers <= 1) {
    fill_rows(0, rows);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const Eigen::Index chunk = (rows + workers - 1) / workers;
    for (Eigen::Index begin = 0; begin < rows; begin += chunk) {
      pool.emplace_back(fill_rows, begin, std::min(rows, begin + chunk));
    }
  }
  return out;
}

}  // namespace rbox
