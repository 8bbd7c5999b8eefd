#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace drivebench::geom {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x{0.0};
  double y{0.0};

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
  Vec2 rotated(double angle) const {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
  Vec2 left_normal() const { return {-y, x}; }
  Vec2 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
  }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Maps any angle to (-pi, pi].
double normalize_angle(double angle);

/// Planar pose; yaw is counter-clockwise with 0 along +x and is kept
/// normalized to (-pi, pi].
struct Pose2D {
  double x{0.0};
  double y{0.0};
  double yaw{0.0};

  Pose2D() = default;
  Pose2D(double x_, double y_, double yaw_) : x(x_), y(y_), yaw(normalize_angle(yaw_)) {}

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const { return {std::cos(yaw), std::sin(yaw)}; }
  Vec2 to_world(Vec2 local) const { return position() + local.rotated(yaw); }
  Vec2 to_local(Vec2 world) const { return (world - position()).rotated(-yaw); }
};

struct OrientedBox {
  Pose2D center;
  double half_length{1.0};  // extent along the heading axis
  double half_width{0.5};

  std::array<Vec2, 4> corners() const;
};

/// Separating-axis overlap test over the four box axes. Touching boxes
/// (zero separation) count as intersecting.
bool obb_intersects(const OrientedBox& a, const OrientedBox& b);

/// Euclidean gap between two boxes; 0 when they overlap or touch.
double obb_distance(const OrientedBox& a, const OrientedBox& b);

/// Ordered point chain with at least 2 points and nonzero segment lengths.
/// Immutable after construction; cumulative arc lengths are precomputed.
class Polyline {
 public:
  explicit Polyline(std::vector<Vec2> points);

  const std::vector<Vec2>& points() const { return points_; }
  const std::vector<double>& cumulative_lengths() const { return cumulative_; }
  double length() const { return cumulative_.back(); }
  std::size_t size() const { return points_.size(); }

  /// Point at the given arc length, clamped to [0, length].
  Vec2 point_at(double arc) const;
  /// Unit tangent of the segment containing the given arc length.
  Vec2 tangent_at(double arc) const;
  double heading_at(double arc) const;

 private:
  std::size_t segment_index(double arc) const;

  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
};

struct PathProjection {
  double arc_length{0.0};
  double lateral_offset{0.0};  // positive on the left of travel direction
  std::size_t segment{0};
  double distance{0.0};  // unsigned distance to the path
};

PathProjection project_onto(const Polyline& path, Vec2 p);

/// Projection restricted to segments overlapping
/// [arc_hint - back_window, arc_hint + forward_window]. Warm-start variant
/// for callers tracking steady progress along a long path.
PathProjection project_onto_window(const Polyline& path, Vec2 p, double arc_hint,
                                   double back_window, double forward_window);

/// Resamples at a fixed arc-length spacing. The first point is kept, the
/// final gap may be shorter. Throws std::invalid_argument if the path is
/// shorter than one spacing.
Polyline resample_equidistant(const Polyline& path, double spacing);

}  // namespace drivebench::geom
