#include "drivebench/driver.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace drivebench::sim {
namespace {

/// Speed that reaches zero exactly at the hold point under constant decel.
/// The 0.3 m dead band kills the asymptotic creep of the sqrt profile.
double stop_cap(double gap, double decel) {
  const double effective = gap - 0.3;
  return effective <= 0.0 ? 0.0 : std::sqrt(2.0 * decel * effective);
}

}  // namespace

ExpertDriver::ExpertDriver(const plan::StylePreset& preset, const WorldParams& world_params)
    : pid_(ctrl::PidGains{}, world_params.vehicle.max_steer) {
  config_.idm = preset.idm;
  config_.vehicle = world_params.vehicle;
  config_.lon_model = ctrl::default_lon_model();
}

EgoControl ExpertDriver::act(const World& world) {
  const VehicleState& ego = world.ego();
  const double arc = world.ego_arc();
  const double dt = world.params().dt;
  const auto actors = world.actor_states();
  const plan::PlanResult planned = plan::plan(ego, actors, world.path(), arc, config_, dt);
  double target = std::min(planned.target_speed, world.params().speed_limit);

  // Virtual stops hold the front bumper 1 m short of the line. A line
  // already passed by 3 m or more no longer caps the target.
  const double front = arc + ego.length / 2.0;
  for (const TrafficLight& light : world.lights()) {
    if (!light.red_at(world.time())) continue;
    const double gap = light.arc - front - 1.0;
    if (gap > -3.0) target = std::min(target, stop_cap(gap, config_.idm.b_emergency));
  }
  for (const StopSign& sign : world.stop_signs()) {
    if (sign.satisfied || sign.counted) continue;
    const double gap = sign.arc - front - 1.0;
    if (gap > -3.0) target = std::min(target, stop_cap(gap, config_.idm.b_emergency));
  }
  const double remaining = world.path().length() - arc;
  if (remaining < 50.0) {
    target = std::min(target, std::max(1.2, std::sqrt(2.0 * config_.idm.b_comf * remaining)));
  }

  const auto checkpoints = ctrl::checkpoints_from_path(world.path().polyline(), ego.pose, arc);
  EgoControl control;
  control.steer = pid_.step(ctrl::select_checkpoint(checkpoints, ego.speed * 3.6), dt);
  const ctrl::PedalCommand pedals = ctrl::longitudinal_control(ego.speed, target, config_.lon_model);
  control.throttle = pedals.throttle;
  control.brake = pedals.brake;
  last_target_ = target;
  return control;
}

RouteResult run_route(World& world, Driver& driver, const RunLimits& limits,
                      const std::string& route_id) {
  RouteResult result;
  const double route_length = world.path().length();
  const double dt = world.params().dt;
  const double timeout =
      limits.route_timeout > 0.0 ? limits.route_timeout : 3.0 * route_length / 5.0;
  double blocked = 0.0;
  bool early_stop = false;
  bool timed_out = false;
  std::uint64_t frame = 0;

  while (true) {
    if (world.completed()) {
      result.completed = true;
      break;
    }
    if (world.time() >= timeout || blocked >= limits.blocked_timeout) {
      timed_out = true;
      break;
    }
    if (early_stop && world.ego().speed < world.params().standstill_speed) break;

    EgoControl control;
    double label = 0.0;
    try {
      control = driver.act(world);
      label = driver.last_target_speed();
    } catch (...) {
      world.mutable_ledger().aborted = true;
      break;
    }
    if (limits.early_stop_km >= 0.0 && world.ledger().distance_km >= limits.early_stop_km) {
      early_stop = true;
      control.throttle = 0.0;
      control.brake = 1.0;
      label = 0.0;
    }

    data::FrameRecord record;
    record.route_id = route_id;
    record.frame_index = frame;
    record.sim_time = world.time();
    record.ego_pose = world.ego().pose;
    record.ego_speed = world.ego().speed;
    record.target_speed = label;
    record.checkpoints =
        ctrl::checkpoints_from_path(world.path().polyline(), world.ego().pose, world.ego_arc());
    world.step(control);
    record.events = world.step_events();
    result.frames.push_back(std::move(record));
    ++frame;

    if (world.ego().speed < world.params().standstill_speed) {
      blocked += dt;
    } else {
      blocked = 0.0;
    }
  }

  if (timed_out) ++world.mutable_ledger().count(Infraction::scenario_timeout);
  if (result.completed) world.mutable_ledger().route_fraction = 1.0;
  result.ledger = world.ledger();
  result.min_pedestrian_gap = world.min_pedestrian_gap();
  result.min_pedestrian_gap_stopped = world.min_pedestrian_gap_stopped();
  return result;
}

}  // namespace drivebench::sim
