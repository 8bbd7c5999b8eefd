#include "drivebench/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "drivebench/rng.hpp"

namespace drivebench::sim {
namespace {

constexpr double kInfiniteGap = std::numeric_limits<double>::infinity();

Infraction classify_collision(ActorKind kind) {
  switch (kind) {
    case ActorKind::pedestrian:
      return Infraction::collision_pedestrian;
    case ActorKind::static_obstacle:
      return Infraction::collision_layout;
    default:
      return Infraction::collision_vehicle;
  }
}

/// Lane polyline sampled from the route base at a constant lateral offset.
/// `from_arc` > `to_arc` yields a lane running against the route direction.
std::shared_ptr<geom::Polyline> offset_lane(const geom::Polyline& base, double from_arc,
                                            double to_arc, double offset) {
  const double lo = std::clamp(std::min(from_arc, to_arc), 0.0, base.length());
  const double hi = std::clamp(std::max(from_arc, to_arc), 0.0, base.length());
  std::vector<geom::Vec2> points;
  for (double s = lo; s < hi + 2.5; s += 5.0) {
    const double arc = std::min(s, hi);
    points.push_back(base.point_at(arc) + base.tangent_at(arc).left_normal() * offset);
    if (arc >= hi) break;
  }
  if (points.size() < 2) points.push_back(points.front() + geom::Vec2{1.0, 0.0});
  if (from_arc > to_arc) std::reverse(points.begin(), points.end());
  return std::make_shared<geom::Polyline>(std::move(points));
}

VehicleState make_vehicle(geom::Pose2D pose, double speed, ActorKind kind) {
  VehicleState s;
  s.pose = pose;
  s.speed = speed;
  s.kind = kind;
  return s;
}

}  // namespace

bool TrafficLight::red_at(double time) const {
  const double cycle = red_duration + green_duration;
  const double t = time - cycle * std::floor(time / cycle);
  return t < red_duration;
}

World::World(route::DensePath path, std::vector<ScenarioSpec> scenarios, std::uint64_t seed,
             WorldParams params)
    : path_(std::move(path)), params_(params), seed_(seed) {
  for (std::size_t i = 0; i < scenarios.size(); ++i) build_scenario(scenarios[i], i);
  const auto& line = path_.polyline();
  ego_.pose = geom::Pose2D(line.points().front().x, line.points().front().y, line.heading_at(0.0));
  ego_.kind = ActorKind::ego;
}

double World::jitter(std::size_t scenario_index, const std::string& key, double half_range) const {
  const std::uint64_t stream = rng::combine(seed_, scenario_index + 1);
  const double u = rng::uniform01(stream, rng::hash_string(key));
  return (2.0 * u - 1.0) * half_range;
}

void World::build_scenario(const ScenarioSpec& spec, std::size_t index) {
  const geom::Polyline& base = path_.base();
  const double route_length = base.length();
  const double anchor = std::clamp(spec.trigger_arc, 0.0, route_length);
  const auto left_at = [&base](double arc) { return base.tangent_at(arc).left_normal(); };

  switch (spec.kind) {
    case ScenarioKind::plain_route:
      break;

    case ScenarioKind::construction_obstacle_two_ways: {
      const double zone_length = spec.param("zone_length", 20.0);
      const double lane_offset = spec.param("lane_offset", params_.lane_width);
      const double ramp = spec.param("ramp", 10.0);
      const double zone_end = anchor + zone_length;
      path_.apply_lateral_shift(anchor - ramp - 5.0, zone_end + ramp + 5.0, lane_offset, ramp);
      for (double s = anchor; s <= zone_end + 1e-9; s += 4.0) {
        Actor cone;
        cone.behavior = Actor::Behavior::static_box;
        cone.state = make_vehicle(
            geom::Pose2D(base.point_at(s).x, base.point_at(s).y, base.heading_at(s)), 0.0,
            ActorKind::static_obstacle);
        cone.state.length = 0.5;
        cone.state.width = 0.5;
        add_actor(cone);
      }
      // Oncoming stream in the adjacent lane the detour borrows. The cars
      // wait parked just beyond the zone and are released while the ego is
      // still 120 m out, so the stream always occupies the zone before the
      // ego's corridor reaches it and the ego has to yield. Successive gaps
      // stay shorter than the zone, so the zone never frees mid-stream.
      const int count = static_cast<int>(spec.param("oncoming_count", 3.0));
      const double speed = spec.param("oncoming_speed", 8.0);
      const double spacing = speed * spec.param("oncoming_gap", 3.0);
      const auto lane =
          offset_lane(base, std::min(zone_end + 150.0, route_length), anchor - 150.0, lane_offset);
      for (int k = 0; k < count; ++k) {
        const double entry = 8.0 + spacing * k + jitter(index, "oncoming" + std::to_string(k), 3.0);
        const double base_arc = std::min(zone_end + entry, route_length - 2.0);
        Actor car;
        car.behavior = Actor::Behavior::lane_follow;
        car.lane = lane;
        car.cruise_speed = speed;
        car.activation_arc = std::max(0.0, anchor - 120.0);
        const geom::Vec2 pos = base.point_at(base_arc) + left_at(base_arc) * lane_offset;
        const double yaw = geom::normalize_angle(base.heading_at(base_arc) + geom::kPi);
        car.state = make_vehicle(geom::Pose2D(pos.x, pos.y, yaw), 0.0, ActorKind::background_vehicle);
        car.lane_arc = geom::project_onto(*lane, pos).arc_length;
        add_actor(car);
      }
      break;
    }

    case ScenarioKind::signalized_junction_left_turn: {
      TrafficLight light;
      light.arc = anchor;
      light.red_duration = spec.param("red_duration", 20.0) + jitter(index, "red", 2.0);
      add_traffic_light(light);
      // Straight-through oncoming traffic on the opposite lane, timed off
      // the fixed green instant so it crosses the junction right after the
      // ego is released.
      const double junction_arc = std::min(anchor + spec.param("junction_offset", 10.0), route_length);
      const double speed = spec.param("cross_speed", 8.0);
      const int count = static_cast<int>(spec.param("cross_count", 2.0));
      const geom::Vec2 t = base.tangent_at(std::max(0.0, anchor - 2.0));
      const geom::Vec2 n = t.left_normal();
      const geom::Vec2 junction = base.point_at(junction_arc);
      const double far = 300.0;
      std::vector<geom::Vec2> lane_points;
      for (double s = far; s >= -60.0 - 1e-9; s -= 5.0) {
        lane_points.push_back(junction + n * params_.lane_width + t * s);
      }
      const auto lane = std::make_shared<geom::Polyline>(std::move(lane_points));
      for (int k = 0; k < count; ++k) {
        const double delay = 3.0 + 4.0 * k + jitter(index, "cross" + std::to_string(k), 1.0);
        const double distance = speed * (light.red_duration + delay);
        Actor car;
        car.behavior = Actor::Behavior::lane_follow;
        car.lane = lane;
        car.cruise_speed = speed;
        const geom::Vec2 pos = junction + n * params_.lane_width + t * distance;
        const double yaw = std::atan2(-t.y, -t.x);
        car.state = make_vehicle(geom::Pose2D(pos.x, pos.y, yaw), speed, ActorKind::background_vehicle);
        car.lane_arc = geom::project_onto(*lane, pos).arc_length;
        add_actor(car);
      }
      break;
    }

    case ScenarioKind::vehicle_turning_route_pedestrian:
    case ScenarioKind::dynamic_object_crossing: {
      const geom::Polyline& realized = path_.polyline();
      const double crossing_arc =
          std::min(anchor + spec.param("crossing_offset", 12.0), realized.length() - 1.0);
      const double side = spec.param("side", 1.0) >= 0.0 ? 1.0 : -1.0;
      const double side_offset = spec.param("side_offset", 5.0);
      const geom::Vec2 across = realized.tangent_at(crossing_arc).left_normal() * side;
      const geom::Vec2 start = realized.point_at(crossing_arc) + across * side_offset;
      Actor ped;
      ped.behavior = Actor::Behavior::walker;
      ped.walk_speed =
          std::max(0.5, spec.param("ped_speed", 0.75) + jitter(index, "ped_speed", 0.1));
      ped.walk_distance = spec.param("walk_distance", side_offset + params_.lane_width + 2.5);
      ped.trigger_point = realized.point_at(anchor);
      ped.trigger_radius = spec.param("trigger_radius", 28.0);
      const double yaw = std::atan2(-across.y, -across.x);
      ped.state = make_vehicle(geom::Pose2D(start.x, start.y, yaw), 0.0, ActorKind::pedestrian);
      ped.state.length = 0.5;
      ped.state.width = 0.5;
      add_actor(ped);
      if (spec.kind == ScenarioKind::dynamic_object_crossing) {
        const double setback = spec.param("occluder_setback", 5.0);
        const double occ_arc = std::max(0.0, crossing_arc - setback);
        const geom::Vec2 pos =
            realized.point_at(occ_arc) +
            realized.tangent_at(occ_arc).left_normal() * side * spec.param("occluder_offset", 3.4);
        Actor occluder;
        occluder.behavior = Actor::Behavior::static_box;
        occluder.state = make_vehicle(
            geom::Pose2D(pos.x, pos.y, realized.heading_at(occ_arc)), 0.0,
            ActorKind::static_obstacle);
        occluder.state.length = 5.0;
        occluder.state.width = 2.2;
        add_actor(occluder);
      }
      break;
    }

    case ScenarioKind::lead_vehicle_slowdown: {
      const double start_arc = std::clamp(spec.param("lead_start", 40.0), 0.0, route_length - 5.0);
      Actor lead;
      lead.behavior = Actor::Behavior::lane_follow;
      lead.lane = std::make_shared<geom::Polyline>(path_.polyline());
      lead.cruise_speed = spec.param("lead_speed", 10.0) + jitter(index, "lead_speed", 0.5);
      lead.script_trigger_arc = anchor;
      lead.script_slow_speed = spec.param("slow_speed", 1.5);
      lead.script_slow_duration = spec.param("slow_duration", 8.0);
      const geom::Vec2 pos = path_.polyline().point_at(start_arc);
      lead.state = make_vehicle(
          geom::Pose2D(pos.x, pos.y, path_.polyline().heading_at(start_arc)),
          lead.cruise_speed, ActorKind::background_vehicle);
      lead.lane_arc = start_arc;
      add_actor(lead);
      break;
    }
  }
}

void World::add_traffic_light(const TrafficLight& light) { lights_.push_back(light); }

void World::add_stop_sign(double arc) {
  StopSign sign;
  sign.arc = arc;
  stop_signs_.push_back(sign);
}

void World::add_actor(const Actor& actor) {
  actors_.push_back(actor);
  in_contact_.push_back(0);
}

void World::add_hazard(const HazardSpec& hazard) {
  HazardTrack track;
  track.spec = hazard;
  if (hazard.rate_per_km <= 0.0) return;
  const std::uint64_t stream =
      rng::combine(seed_, rng::combine(rng::hash_string("hazard"), hazards_.size()));
  if (hazard.deterministic) {
    track.next_km = 1.0 / hazard.rate_per_km;
  } else {
    const double u = rng::uniform01(stream, track.draws);
    track.next_km = -std::log1p(-u) / hazard.rate_per_km;
  }
  hazards_.push_back(track);
}

std::vector<VehicleState> World::actor_states() const {
  std::vector<VehicleState> states;
  states.reserve(actors_.size());
  for (const Actor& a : actors_) states.push_back(a.state);
  return states;
}

bool World::completed() const {
  return ego_arc_ >= path_.length() - params_.completion_tolerance;
}

void World::process_triggers() {
  for (Actor& a : actors_) {
    if (!a.triggered) {
      const bool by_arc = a.activation_arc >= 0.0 && ego_arc_ >= a.activation_arc;
      const bool by_radius =
          a.trigger_radius > 0.0 &&
          (ego_.pose.position() - a.trigger_point).norm() <= a.trigger_radius;
      if (by_arc || by_radius) {
        a.triggered = true;
        if (a.behavior == Actor::Behavior::walker) a.state.speed = a.walk_speed;
      }
    }
    if (a.script_trigger_arc >= 0.0 && a.script_elapsed < 0.0 && ego_arc_ >= a.script_trigger_arc) {
      a.script_elapsed = 0.0;
    }
  }
}

void World::advance_background() {
  const double dt = params_.dt;
  struct Move {
    double accel{0.0};
    double steer{0.0};
  };
  std::vector<Move> moves(actors_.size());

  // Targets come from the pre-move snapshot so intra-step ordering cannot
  // leak between actors.
  for (std::size_t i = 0; i < actors_.size(); ++i) {
    Actor& a = actors_[i];
    if (a.behavior != Actor::Behavior::lane_follow) continue;
    const bool held = a.activation_arc >= 0.0 && !a.triggered;
    double cruise = held ? 0.0 : a.cruise_speed;
    if (a.script_elapsed >= 0.0 && a.script_elapsed < a.script_slow_duration) {
      cruise = a.script_slow_speed;
    }
    double best_gap = kInfiniteGap;
    double leader_speed = 0.0;
    const auto consider = [&](const VehicleState& other) {
      const auto proj =
          geom::project_onto_window(*a.lane, other.pose.position(), a.lane_arc, 10.0, 70.0);
      if (std::abs(proj.lateral_offset) > 1.8 || proj.distance > 1.8) return;
      const double ahead = proj.arc_length - a.lane_arc;
      if (ahead <= 0.5 || ahead > 60.0) return;
      const double gap = ahead - a.state.length / 2.0 - other.length / 2.0;
      if (gap < best_gap) {
        best_gap = gap;
        const double along = other.pose.heading().dot(a.lane->tangent_at(proj.arc_length));
        leader_speed = std::max(0.0, other.speed * along);
      }
    };
    for (std::size_t j = 0; j < actors_.size(); ++j) {
      if (j != i) consider(actors_[j].state);
    }
    consider(ego_);
    double target = 0.0;
    if (cruise > 0.01) {
      plan::IdmParams idm = params_.background_idm;
      idm.v0_max = cruise;
      target = plan::idm_target_speed(a.state.speed, best_gap, leader_speed, idm, dt);
    }
    moves[i].accel = (target - a.state.speed) / dt;
    const double look = std::max(3.0, a.state.speed * 0.8);
    if (a.lane->length() - a.lane_arc <= look) {
      // Lane exhausted: depart straight instead of orbiting the clamped
      // endpoint, so a lane ending on the route never blocks the ego.
      moves[i].steer = 0.0;
      continue;
    }
    const geom::Vec2 ahead_point = a.lane->point_at(a.lane_arc + look);
    const geom::Vec2 local = a.state.pose.to_local(ahead_point);
    moves[i].steer = std::clamp(2.0 * std::atan2(local.y, std::max(local.x, 0.5)),
                                -params_.vehicle.max_steer, params_.vehicle.max_steer);
  }

  for (std::size_t i = 0; i < actors_.size(); ++i) {
    Actor& a = actors_[i];
    switch (a.behavior) {
      case Actor::Behavior::static_box:
        break;
      case Actor::Behavior::walker:
        if (a.state.speed > 0.0) {
          a.state = walk_step(a.state, dt);
          a.walked += a.state.speed * dt;
          if (a.walked >= a.walk_distance) a.state.speed = 0.0;
        }
        break;
      case Actor::Behavior::lane_follow:
        a.state = bicycle_step(a.state, moves[i].steer, moves[i].accel, dt, params_.vehicle);
        a.lane_arc =
            geom::project_onto_window(*a.lane, a.state.pose.position(), a.lane_arc, 5.0, 25.0)
                .arc_length;
        if (a.script_elapsed >= 0.0) a.script_elapsed += dt;
        break;
    }
  }
}

void World::advance_ego(const EgoControl& control) {
  const double throttle = std::clamp(control.throttle, 0.0, 1.0);
  const double brake = std::clamp(control.brake, 0.0, 1.0);
  const double accel =
      throttle * params_.vehicle.throttle_accel - brake * params_.vehicle.brake_decel;
  ego_ = bicycle_step(ego_, control.steer, accel, params_.dt, params_.vehicle);
  const auto proj =
      geom::project_onto_window(path_.polyline(), ego_.pose.position(), ego_arc_, 5.0, 15.0);
  ledger_.distance_km += std::max(0.0, proj.arc_length - ego_arc_) / 1000.0;
  ego_arc_ = proj.arc_length;
  ledger_.route_fraction =
      std::max(ledger_.route_fraction, std::min(1.0, ego_arc_ / path_.length()));
}

void World::detect_collisions() {
  const geom::OrientedBox ego_box = ego_.footprint();
  const double ego_reach = std::hypot(ego_.length, ego_.width) / 2.0;
  for (std::size_t i = 0; i < actors_.size(); ++i) {
    const VehicleState& other = actors_[i].state;
    const double reach =
        ego_reach + std::hypot(other.length, other.width) / 2.0;
    const bool near = (other.pose.position() - ego_.pose.position()).norm() <= reach + 0.5;
    const bool hit = near && geom::obb_intersects(ego_box, other.footprint());
    if (hit && !in_contact_[i]) {
      const Infraction type = classify_collision(other.kind);
      ++ledger_.count(type);
      step_events_.push_back(infraction_tag(type));
    }
    in_contact_[i] = hit ? 1 : 0;
    if (other.kind == ActorKind::pedestrian) {
      const double gap = near ? geom::obb_distance(ego_box, other.footprint())
                              : (other.pose.position() - ego_.pose.position()).norm() - reach;
      min_pedestrian_gap_ = std::min(min_pedestrian_gap_, gap);
      if (ego_.speed < params_.standstill_speed) {
        min_pedestrian_gap_stopped_ = std::min(min_pedestrian_gap_stopped_, gap);
      }
    }
  }
}

void World::detect_line_infractions(double previous_front_arc) {
  const double front_arc = ego_arc_ + params_.vehicle.wheelbase / 2.0;
  for (const TrafficLight& light : lights_) {
    const bool crossing = previous_front_arc < light.arc && front_arc >= light.arc;
    if (crossing && light.red_at(time_)) {
      ++ledger_.count(Infraction::red_light);
      step_events_.push_back(infraction_tag(Infraction::red_light));
    }
  }
  for (StopSign& sign : stop_signs_) {
    if (sign.counted) continue;
    if (!sign.satisfied && ego_.speed < params_.standstill_speed &&
        front_arc >= sign.arc - 3.0 && front_arc <= sign.arc + 0.5) {
      sign.satisfied = true;
    }
    if (previous_front_arc < sign.arc && front_arc >= sign.arc) {
      sign.counted = true;
      if (!sign.satisfied) {
        ++ledger_.count(Infraction::stop_sign);
        step_events_.push_back(infraction_tag(Infraction::stop_sign));
      }
    }
  }
}

void World::apply_hazards() {
  for (HazardTrack& track : hazards_) {
    while (ledger_.distance_km >= track.next_km) {
      const Infraction type = infraction_from_tag(track.spec.type);
      ++ledger_.count(type);
      step_events_.push_back(track.spec.type);
      ++track.draws;
      if (track.spec.deterministic) {
        track.next_km += 1.0 / track.spec.rate_per_km;
      } else {
        const std::uint64_t stream =
            rng::combine(seed_, rng::combine(rng::hash_string("hazard"),
                                             static_cast<std::uint64_t>(&track - hazards_.data())));
        const double u = rng::uniform01(stream, track.draws);
        track.next_km += -std::log1p(-u) / track.spec.rate_per_km;
      }
    }
  }
}

void World::step(const EgoControl& control) {
  step_events_.clear();
  process_triggers();
  advance_background();
  const double previous_front_arc = ego_arc_ + params_.vehicle.wheelbase / 2.0;
  advance_ego(control);
  detect_collisions();
  detect_line_infractions(previous_front_arc);
  apply_hazards();
  time_ += params_.dt;
}

}  // namespace drivebench::sim
