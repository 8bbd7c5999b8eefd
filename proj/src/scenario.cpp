#include "drivebench/scenario.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace drivebench::sim {
namespace {

constexpr std::array<std::pair<ScenarioKind, const char*>, 6> kNames = {{
    {ScenarioKind::plain_route, "PlainRoute"},
    {ScenarioKind::construction_obstacle_two_ways, "ConstructionObstacleTwoWays"},
    {ScenarioKind::signalized_junction_left_turn, "SignalizedJunctionLeftTurn"},
    {ScenarioKind::vehicle_turning_route_pedestrian, "VehicleTurningRoutePedestrian"},
    {ScenarioKind::dynamic_object_crossing, "DynamicObjectCrossing"},
    {ScenarioKind::lead_vehicle_slowdown, "LeadVehicleSlowdown"},
}};

}  // namespace

const char* scenario_name(ScenarioKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  throw std::invalid_argument("unknown scenario kind");
}

ScenarioKind scenario_kind_from_name(const std::string& name) {
  for (const auto& [kind, known] : kNames) {
    if (name == known) return kind;
  }
  throw std::invalid_argument("unknown scenario kind: " + name);
}

}  // namespace drivebench::sim
