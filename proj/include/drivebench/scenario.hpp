#pragma once

#include <map>
#include <string>

namespace drivebench::sim {

enum class ScenarioKind {
  plain_route,
  construction_obstacle_two_ways,
  signalized_junction_left_turn,
  vehicle_turning_route_pedestrian,
  dynamic_object_crossing,
  lead_vehicle_slowdown,
};

const char* scenario_name(ScenarioKind kind);
ScenarioKind scenario_kind_from_name(const std::string& name);

/// One scripted hazard along a route, anchored at an arc length on the path.
/// Parameters not present in `params` fall back to per-kind defaults.
struct ScenarioSpec {
  ScenarioKind kind{ScenarioKind::plain_route};
  double trigger_arc{0.0};
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
};

/// Scripted infraction injection by travelled distance, independent of the
/// physical actors. Spacing is exponential with the given rate unless
/// `deterministic` pins it to exactly 1/rate km.
struct HazardSpec {
  std::string type{"CV"};
  double rate_per_km{0.0};
  bool deterministic{false};
};

}  // namespace drivebench::sim
