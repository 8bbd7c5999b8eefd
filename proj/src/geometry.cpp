#include "drivebench/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace drivebench::geom {

double normalize_angle(double angle) {
  double a = std::fmod(angle + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

std::array<Vec2, 4> OrientedBox::corners() const {
  const Vec2 fwd = center.heading() * half_length;
  const Vec2 side = center.heading().left_normal() * half_width;
  const Vec2 c = center.position();
  return {c + fwd + side, c + fwd - side, c - fwd - side, c - fwd + side};
}

namespace {

struct Interval {
  double lo;
  double hi;
};

Interval project_corners(const std::array<Vec2, 4>& corners, Vec2 axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Vec2 c : corners) {
    const double t = c.dot(axis);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return {lo, hi};
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squared_norm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

double segment_segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
  // Non-crossing segments attain their distance at an endpoint.
  double d = point_segment_distance(a0, b0, b1);
  d = std::min(d, point_segment_distance(a1, b0, b1));
  d = std::min(d, point_segment_distance(b0, a0, a1));
  d = std::min(d, point_segment_distance(b1, a0, a1));
  return d;
}

}  // namespace

bool obb_intersects(const OrientedBox& a, const OrientedBox& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const std::array<Vec2, 4> axes = {a.center.heading(), a.center.heading().left_normal(),
                                    b.center.heading(), b.center.heading().left_normal()};
  for (Vec2 axis : axes) {
    const Interval ia = project_corners(ca, axis);
    const Interval ib = project_corners(cb, axis);
    if (ia.hi < ib.lo || ib.hi < ia.lo) return false;
  }
  return true;
}

double obb_distance(const OrientedBox& a, const OrientedBox& b) {
  if (obb_intersects(a, b)) return 0.0;
  const auto ca = a.corners();
  const auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2 a0 = ca[i];
    const Vec2 a1 = ca[(i + 1) % 4];
    for (std::size_t j = 0; j < 4; ++j) {
      best = std::min(best, segment_segment_distance(a0, a1, cb[j], cb[(j + 1) % 4]));
    }
  }
  return best;
}

Polyline::Polyline(std::vector<Vec2> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw std::invalid_argument("polyline needs at least 2 points");
  cumulative_.resize(points_.size());
  cumulative_[0] = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double seg = (points_[i] - points_[i - 1]).norm();
    if (seg < 1e-12) throw std::invalid_argument("polyline has duplicate consecutive points");
    cumulative_[i] = cumulative_[i - 1] + seg;
  }
}

std::size_t Polyline::segment_index(double arc) const {
  // First segment whose end lies at or beyond arc.
  const auto it = std::lower_bound(cumulative_.begin() + 1, cumulative_.end(), arc);
  if (it == cumulative_.end()) return points_.size() - 2;
  return static_cast<std::size_t>(it - cumulative_.begin()) - 1;
}

Vec2 Polyline::point_at(double arc) const {
  const double s = std::clamp(arc, 0.0, length());
  const std::size_t i = segment_index(s);
  const double seg_len = cumulative_[i + 1] - cumulative_[i];
  const double t = (s - cumulative_[i]) / seg_len;
  return points_[i] + (points_[i + 1] - points_[i]) * t;
}

Vec2 Polyline::tangent_at(double arc) const {
  const double s = std::clamp(arc, 0.0, length());
  const std::size_t i = segment_index(s);
  return (points_[i + 1] - points_[i]).normalized();
}

double Polyline::heading_at(double arc) const {
  const Vec2 t = tangent_at(arc);
  return std::atan2(t.y, t.x);
}

namespace {

PathProjection project_onto_range(const Polyline& path, Vec2 p, std::size_t first,
                                  std::size_t last) {
  const auto& pts = path.points();
  const auto& cum = path.cumulative_lengths();
  PathProjection best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i < last; ++i) {
    const Vec2 a = pts[i];
    const Vec2 ab = pts[i + 1] - a;
    const double len2 = ab.squared_norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    const Vec2 q = a + ab * t;
    const double d = (p - q).norm();
    if (d < best.distance) {
      best.distance = d;
      best.segment = i;
      best.arc_length = cum[i] + t * std::sqrt(len2);
      const double side = ab.cross(p - a);
      best.lateral_offset = side >= 0.0 ? d : -d;
    }
  }
  return best;
}

}  // namespace

PathProjection project_onto(const Polyline& path, Vec2 p) {
  return project_onto_range(path, p, 0, path.size() - 1);
}

PathProjection project_onto_window(const Polyline& path, Vec2 p, double arc_hint,
                                   double back_window, double forward_window) {
  const auto& cum = path.cumulative_lengths();
  const double lo = std::clamp(arc_hint - back_window, 0.0, path.length());
  const double hi = std::clamp(arc_hint + forward_window, 0.0, path.length());
  auto it_lo = std::upper_bound(cum.begin(), cum.end(), lo);
  auto first = static_cast<std::size_t>(it_lo - cum.begin());
  first = first > 0 ? first - 1 : 0;
  auto it_hi = std::lower_bound(cum.begin(), cum.end(), hi);
  auto last = static_cast<std::size_t>(it_hi - cum.begin());
  last = std::min(last + 1, path.size() - 1);
  if (first >= last) first = last - 1;
  return project_onto_range(path, p, first, last);
}

Polyline resample_equidistant(const Polyline& path, double spacing) {
  if (spacing <= 0.0) throw std::invalid_argument("spacing must be positive");
  const double len = path.length();
  if (len < spacing) throw std::invalid_argument("path shorter than one spacing");
  std::vector<Vec2> out;
  const auto n = static_cast<std::size_t>(std::floor(len / spacing));
  out.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) {
    out.push_back(path.point_at(static_cast<double>(k) * spacing));
  }
  if (len - static_cast<double>(n) * spacing > 1e-9) {
    out.push_back(path.points().back());
  }
  return Polyline(std::move(out));
}

}  // namespace drivebench::geom
