/* Copyright 2026 The LET Metrics Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Upright (yaw-only) 3D boxes and their exact intersection over union.
//
// The 3D IoU of two upright boxes factors into the bird's-eye-view (BEV)
// overlap area of their ground-plane rectangles times the overlap of their
// vertical extents. The BEV overlap is computed by clipping one rectangle
// against the other (Sutherland-Hodgman), which is exact for convex inputs.

#ifndef LET_METRICS_GEOMETRY_H_
#define LET_METRICS_GEOMETRY_H_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "let_metrics/errors.h"

namespace let_metrics {

// Vertex classification tolerance for polygon clipping, in meters.
inline constexpr double kClipTolerance = 1e-9;
// Intersections with smaller area (m^2) are reported as empty.
inline constexpr double kMinIntersectionArea = 1e-12;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend Vec3 operator*(double s, const Vec3& v) {
    return {s * v.x, s * v.y, s * v.z};
  }
  friend Vec3 operator*(const Vec3& v, double s) { return s * v; }
  friend Vec3 operator/(const Vec3& v, double s) {
    return {v.x / s, v.y / s, v.z / s};
  }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double Dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline Vec3 Cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}
inline double Norm(const Vec3& v) { return std::sqrt(Dot(v, v)); }
inline bool IsFinite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(const Vec2& a, const Vec2& b) {
    return {a.x + b.x, a.y + b.y};
  }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) {
    return {a.x - b.x, a.y - b.y};
  }
  friend Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double Cross(const Vec2& a, const Vec2& b) {
  return a.x * b.y - a.y * b.x;
}
inline double Norm(const Vec2& v) { return std::hypot(v.x, v.y); }

// Maps an angle in radians to [-pi, pi).
inline double NormalizeHeading(double heading) {
  constexpr double kPi = std::numbers::pi;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (heading >= -kPi && heading < kPi) return heading;
  double h = std::fmod(heading + kPi, kTwoPi);
  if (h < 0.0) h += kTwoPi;
  h -= kPi;
  // fmod can land exactly on +pi after the shift for inputs like 3*pi.
  return h >= kPi ? h - kTwoPi : h;
}

// An upright 3D box: center, extents along its local x (length), y (width)
// and z (height) axes, and a yaw heading about the world z axis.
//
// The constructor enforces positive finite dimensions, a finite center, and
// normalizes the heading to [-pi, pi).
class Box3D {
 public:
  Box3D(const Vec3& center, double length, double width, double height,
        double heading)
      : center_(center),
        length_(length),
        width_(width),
        height_(height),
        heading_(heading) {
    if (!IsFinite(center)) throw InvalidBoxError("box center is not finite");
    if (!(std::isfinite(length) && length > 0.0) ||
        !(std::isfinite(width) && width > 0.0) ||
        !(std::isfinite(height) && height > 0.0)) {
      std::ostringstream os;
      os << "box dimensions must be positive and finite, got length="
         << length << " width=" << width << " height=" << height;
      throw InvalidBoxError(os.str());
    }
    if (!std::isfinite(heading)) {
      throw InvalidBoxError("box heading is not finite");
    }
    heading_ = NormalizeHeading(heading);
  }

  const Vec3& center() const { return center_; }
  double length() const { return length_; }
  double width() const { return width_; }
  double height() const { return height_; }
  double heading() const { return heading_; }

  double Volume() const { return length_ * width_ * height_; }
  double BottomZ() const { return center_.z - 0.5 * height_; }
  double TopZ() const { return center_.z + 0.5 * height_; }

  // Copy of this box moved to `center`.
  Box3D WithCenter(const Vec3& center) const {
    Box3D out = *this;
    if (!IsFinite(center)) throw InvalidBoxError("box center is not finite");
    out.center_ = center;
    return out;
  }

  friend bool operator==(const Box3D&, const Box3D&) = default;

 private:
  Vec3 center_;
  double length_;
  double width_;
  double height_;
  double heading_;
};

// A convex polygon with counter-clockwise vertices. An empty vertex list
// represents the empty set.
class ConvexPolygon2D {
 public:
  ConvexPolygon2D() = default;

  // Takes the vertices of a convex polygon in either orientation and stores
  // them counter-clockwise with near-duplicate neighbors removed. Fewer than
  // three distinct vertices, or an area below kMinIntersectionArea, yields
  // the empty polygon.
  explicit ConvexPolygon2D(std::vector<Vec2> vertices) {
    std::vector<Vec2> kept;
    kept.reserve(vertices.size());
    for (const Vec2& v : vertices) {
      if (kept.empty() || Norm(v - kept.back()) > kClipTolerance) {
        kept.push_back(v);
      }
    }
    while (kept.size() > 1 &&
           Norm(kept.front() - kept.back()) <= kClipTolerance) {
      kept.pop_back();
    }
    if (kept.size() < 3) return;
    const double signed_area = SignedArea(kept);
    if (std::abs(signed_area) < kMinIntersectionArea) return;
    if (signed_area < 0.0) std::reverse(kept.begin(), kept.end());
    vertices_ = std::move(kept);
  }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  bool empty() const { return vertices_.empty(); }
  double Area() const { return empty() ? 0.0 : SignedArea(vertices_); }

 private:
  static double SignedArea(const std::vector<Vec2>& pts) {
    double twice = 0.0;
    for (std::size_t i = 0, n = pts.size(); i < n; ++i) {
      twice += Cross(pts[i], pts[(i + 1) % n]);
    }
    return 0.5 * twice;
  }

  std::vector<Vec2> vertices_;
};

// Ground-plane rectangle of `box`, counter-clockwise, starting at the
// front-right corner (+length/2, -width/2) in box coordinates.
inline ConvexPolygon2D BevFootprint(const Box3D& box) {
  const double c = std::cos(box.heading());
  const double s = std::sin(box.heading());
  const double hl = 0.5 * box.length();
  const double hw = 0.5 * box.width();
  const Vec2 center{box.center().x, box.center().y};
  const Vec2 local[4] = {{hl, -hw}, {hl, hw}, {-hl, hw}, {-hl, -hw}};
  std::vector<Vec2> corners;
  corners.reserve(4);
  for (const Vec2& p : local) {
    corners.push_back(center + Vec2{c * p.x - s * p.y, s * p.x + c * p.y});
  }
  return ConvexPolygon2D(std::move(corners));
}

namespace internal {

// Keeps the part of `poly` on the left of the directed line a->b.
inline std::vector<Vec2> ClipToLeftHalfPlane(const std::vector<Vec2>& poly,
                                             const Vec2& a, const Vec2& b) {
  std::vector<Vec2> out;
  if (poly.empty()) return out;
  out.reserve(poly.size() + 2);
  const Vec2 dir = b - a;
  const double len = Norm(dir);
  if (len <= kClipTolerance) return poly;
  auto signed_distance = [&](const Vec2& p) { return Cross(dir, p - a) / len; };

  Vec2 prev = poly.back();
  double prev_d = signed_distance(prev);
  for (const Vec2& cur : poly) {
    const double cur_d = signed_distance(cur);
    const bool cur_in = cur_d >= -kClipTolerance;
    const bool prev_in = prev_d >= -kClipTolerance;
    if (cur_in != prev_in) {
      const double t = prev_d / (prev_d - cur_d);
      out.push_back(prev + t * (cur - prev));
    }
    if (cur_in) out.push_back(cur);
    prev = cur;
    prev_d = cur_d;
  }
  return out;
}

}  // namespace internal

// Intersection of two convex polygons.
inline ConvexPolygon2D ConvexIntersection(const ConvexPolygon2D& a,
                                          const ConvexPolygon2D& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Vec2> clipped = a.vertices();
  const auto& clip = b.vertices();
  for (std::size_t i = 0, n = clip.size(); i < n && !clipped.empty(); ++i) {
    clipped = internal::ClipToLeftHalfPlane(clipped, clip[i], clip[(i + 1) % n]);
  }
  return ConvexPolygon2D(std::move(clipped));
}

inline double ConvexIntersectionArea(const ConvexPolygon2D& a,
                                     const ConvexPolygon2D& b) {
  return ConvexIntersection(a, b).Area();
}

namespace internal {

inline auto BoxKey(const Box3D& b) {
  return std::make_tuple(b.center().x, b.center().y, b.center().z, b.length(),
                         b.width(), b.height(), b.heading());
}

}  // namespace internal

// 3D IoU of two upright boxes. The pair is put in a canonical order first so
// that Iou3d(a, b) == Iou3d(b, a) bit for bit.
inline double Iou3d(const Box3D& a, const Box3D& b) {
  const bool swap = internal::BoxKey(b) < internal::BoxKey(a);
  const Box3D& first = swap ? b : a;
  const Box3D& second = swap ? a : b;

  const double z_overlap = std::min(first.TopZ(), second.TopZ()) -
                           std::max(first.BottomZ(), second.BottomZ());
  if (z_overlap <= 0.0) return 0.0;
  const double reach = 0.5 * (std::hypot(first.length(), first.width()) +
                              std::hypot(second.length(), second.width()));
  if (std::hypot(first.center().x - second.center().x,
                 first.center().y - second.center().y) >= reach) {
    return 0.0;
  }
  const double bev = ConvexIntersectionArea(BevFootprint(first),
                                            BevFootprint(second));
  if (bev <= 0.0) return 0.0;
  const double intersection = bev * z_overlap;
  const double union_volume = first.Volume() + second.Volume() - intersection;
  if (union_volume <= 0.0) return 0.0;
  return std::clamp(intersection / union_volume, 0.0, 1.0);
}

}  // namespace let_metrics

#endif  // LET_METRICS_GEOMETRY_H_
