#pragma once

#include <cstddef>
#include <vector>

#include "drivebench/geometry.hpp"

namespace drivebench::route {

/// Sparse target points, possibly hundreds of meters apart.
struct SparseRoute {
  std::vector<geom::Vec2> target_points;
};

/// Lateral displacement over [start_arc, end_arc] of the unshifted path,
/// ramped with a cosine blend over `ramp` meters at each end.
struct ShiftSegment {
  double start_arc{0.0};
  double end_arc{0.0};
  double offset{0.0};  // positive = left of travel direction
  double ramp{0.0};
};

/// Directed graph of drivable lane points with Euclidean edge costs.
class LaneGraph {
 public:
  int add_node(geom::Vec2 position);
  void add_edge(int from, int to);
  void add_bidirectional_edge(int a, int b);

  std::size_t node_count() const { return nodes_.size(); }
  geom::Vec2 node_position(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  int nearest_node(geom::Vec2 p) const;

  /// A* with straight-line heuristic. Returns the node sequence from `from`
  /// to `to` inclusive, or an empty vector when unreachable.
  std::vector<int> shortest_path(int from, int to) const;

 private:
  std::vector<geom::Vec2> nodes_;
  std::vector<std::vector<int>> adjacency_;
};

/// Equidistant path (1 m spacing) with scenario-induced lateral shifts.
/// Shift arcs refer to positions on the unshifted path; the realized
/// polyline is regenerated from the base whenever shifts change, so
/// applying the opposite offset over the same segment restores the base
/// exactly.
class DensePath {
 public:
  static constexpr double kSpacing = 1.0;

  explicit DensePath(geom::Polyline base);

  const geom::Polyline& polyline() const { return realized_; }
  const geom::Polyline& base() const { return base_; }
  const std::vector<ShiftSegment>& shift_segments() const { return segments_; }
  double length() const { return realized_.length(); }

  /// Requires 0 <= start < end <= base length and ramp <= (end - start) / 2.
  /// A segment with identical bounds and ramp merges by summing offsets
  /// (removing itself when the sum reaches zero); any other overlap throws.
  void apply_lateral_shift(double start_arc, double end_arc, double offset, double ramp);

 private:
  void rebuild();

  geom::Polyline base_;
  geom::Polyline realized_;
  std::vector<ShiftSegment> segments_;
};

DensePath apply_lateral_shift(const DensePath& path, double start_arc, double end_arc,
                              double offset, double ramp);

/// Connects target points with straight segments and resamples at 1 m.
DensePath densify(const SparseRoute& sparse);

/// Routes between consecutive target points through the lane graph
/// (nearest-node snapping), then resamples at 1 m. Throws when a target
/// point cannot be reached, naming its index.
DensePath densify(const SparseRoute& sparse, const LaneGraph& graph);

}  // namespace drivebench::route
