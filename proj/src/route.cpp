#include "drivebench/route.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace drivebench::route {

using geom::Vec2;

int LaneGraph::add_node(Vec2 position) {
  nodes_.push_back(position);
  adjacency_.emplace_back();
  return static_cast<int>(nodes_.size()) - 1;
}

void LaneGraph::add_edge(int from, int to) {
  adjacency_.at(static_cast<std::size_t>(from)).push_back(to);
  nodes_.at(static_cast<std::size_t>(to));
}

void LaneGraph::add_bidirectional_edge(int a, int b) {
  add_edge(a, b);
  add_edge(b, a);
}

int LaneGraph::nearest_node(Vec2 p) const {
  if (nodes_.empty()) throw std::invalid_argument("lane graph has no nodes");
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double d = (nodes_[i] - p).squared_norm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<int> LaneGraph::shortest_path(int from, int to) const {
  const auto n = nodes_.size();
  nodes_.at(static_cast<std::size_t>(from));
  nodes_.at(static_cast<std::size_t>(to));

  const Vec2 goal = nodes_[static_cast<std::size_t>(to)];
  std::vector<double> g(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  std::vector<bool> closed(n, false);

  using Entry = std::pair<double, int>;  // (f = g + heuristic, node)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[static_cast<std::size_t>(from)] = 0.0;
  open.emplace((nodes_[static_cast<std::size_t>(from)] - goal).norm(), from);

  while (!open.empty()) {
    const int cur = open.top().second;
    open.pop();
    const auto cu = static_cast<std::size_t>(cur);
    if (closed[cu]) continue;
    closed[cu] = true;
    if (cur == to) break;
    for (int nb : adjacency_[cu]) {
      const auto nu = static_cast<std::size_t>(nb);
      const double cand = g[cu] + (nodes_[nu] - nodes_[cu]).norm();
      if (cand < g[nu]) {
        g[nu] = cand;
        parent[nu] = cur;
        open.emplace(cand + (nodes_[nu] - goal).norm(), nb);
      }
    }
  }

  if (!closed[static_cast<std::size_t>(to)]) return {};
  std::vector<int> path;
  for (int v = to; v != -1; v = parent[static_cast<std::size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

double shift_weight(double arc, const ShiftSegment& seg) {
  if (arc <= seg.start_arc || arc >= seg.end_arc) return 0.0;
  if (seg.ramp <= 0.0) return 1.0;
  const double from_start = arc - seg.start_arc;
  const double from_end = seg.end_arc - arc;
  if (from_start < seg.ramp) return 0.5 * (1.0 - std::cos(geom::kPi * from_start / seg.ramp));
  if (from_end < seg.ramp) return 0.5 * (1.0 - std::cos(geom::kPi * from_end / seg.ramp));
  return 1.0;
}

/// Unit left-normal at each vertex; interior vertices use the bisector of
/// the adjacent segment directions.
std::vector<Vec2> vertex_normals(const geom::Polyline& line) {
  const auto& pts = line.points();
  std::vector<Vec2> normals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Vec2 dir;
    if (i == 0) {
      dir = (pts[1] - pts[0]).normalized();
    } else if (i + 1 == pts.size()) {
      dir = (pts[i] - pts[i - 1]).normalized();
    } else {
      dir = (pts[i] - pts[i - 1]).normalized() + (pts[i + 1] - pts[i]).normalized();
      if (dir.norm() < 1e-9) {
        dir = (pts[i] - pts[i - 1]).normalized();
      } else {
        dir = dir.normalized();
      }
    }
    normals[i] = dir.left_normal();
  }
  return normals;
}

}  // namespace

DensePath::DensePath(geom::Polyline base) : base_(std::move(base)), realized_(base_) {}

void DensePath::rebuild() {
  if (segments_.empty()) {
    realized_ = base_;
    return;
  }
  std::vector<Vec2> pts = base_.points();
  const auto normals = vertex_normals(base_);
  const auto& cum = base_.cumulative_lengths();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double total = 0.0;
    for (const auto& seg : segments_) total += seg.offset * shift_weight(cum[i], seg);
    pts[i] += normals[i] * total;
  }
  realized_ = geom::Polyline(std::move(pts));
}

void DensePath::apply_lateral_shift(double start_arc, double end_arc, double offset,
                                    double ramp) {
  if (!(start_arc >= 0.0 && start_arc < end_arc && end_arc <= base_.length())) {
    throw std::invalid_argument("shift segment out of path bounds");
  }
  if (ramp < 0.0 || ramp > (end_arc - start_arc) / 2.0) {
    throw std::invalid_argument("ramp exceeds half the segment length");
  }

  for (std::size_t i = 0; i < segments_.size(); ++i) {
    auto& seg = segments_[i];
    const bool same = std::abs(seg.start_arc - start_arc) < 1e-9 &&
                      std::abs(seg.end_arc - end_arc) < 1e-9 && std::abs(seg.ramp - ramp) < 1e-9;
    if (same) {
      seg.offset += offset;
      if (std::abs(seg.offset) < 1e-12) segments_.erase(segments_.begin() + static_cast<std::ptrdiff_t>(i));
      rebuild();
      return;
    }
    if (start_arc < seg.end_arc && seg.start_arc < end_arc) {
      throw std::invalid_argument("shift overlaps an existing shift segment");
    }
  }

  if (std::abs(offset) < 1e-12) return;
  segments_.push_back({start_arc, end_arc, offset, ramp});
  rebuild();
}

DensePath apply_lateral_shift(const DensePath& path, double start_arc, double end_arc,
                              double offset, double ramp) {
  DensePath out = path;
  out.apply_lateral_shift(start_arc, end_arc, offset, ramp);
  return out;
}

namespace {

geom::Polyline assemble_and_resample(const std::vector<Vec2>& raw) {
  std::vector<Vec2> pts;
  pts.reserve(raw.size());
  for (Vec2 p : raw) {
    if (pts.empty() || (p - pts.back()).norm() > 1e-9) pts.push_back(p);
  }
  if (pts.size() < 2) throw std::invalid_argument("route degenerates to a single point");
  return geom::resample_equidistant(geom::Polyline(std::move(pts)), DensePath::kSpacing);
}

}  // namespace

DensePath densify(const SparseRoute& sparse) {
  if (sparse.target_points.size() < 2) {
    throw std::invalid_argument("sparse route needs at least 2 target points");
  }
  return DensePath(assemble_and_resample(sparse.target_points));
}

DensePath densify(const SparseRoute& sparse, const LaneGraph& graph) {
  if (sparse.target_points.size() < 2) {
    throw std::invalid_argument("sparse route needs at least 2 target points");
  }
  std::vector<Vec2> raw;
  raw.push_back(sparse.target_points.front());
  for (std::size_t i = 0; i + 1 < sparse.target_points.size(); ++i) {
    const int a = graph.nearest_node(sparse.target_points[i]);
    const int b = graph.nearest_node(sparse.target_points[i + 1]);
    const auto nodes = graph.shortest_path(a, b);
    if (nodes.empty()) {
      throw std::runtime_error("target point " + std::to_string(i + 1) +
                               " unreachable in lane graph");
    }
    for (int id : nodes) raw.push_back(graph.node_position(id));
    raw.push_back(sparse.target_points[i + 1]);
  }
  return DensePath(assemble_and_resample(raw));
}

}  // namespace drivebench::route
