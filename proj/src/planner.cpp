#include "drivebench/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace drivebench::plan {

using geom::OrientedBox;
using geom::Vec2;
using sim::ActorKind;
using sim::VehicleState;

StylePreset default_preset() {
  StylePreset p;
  p.name = "default";
  p.idm = IdmParams{};
  p.idm.stop_margin_pedestrian = 6.0;
  return p;
}

StylePreset adjusted_preset() {
  StylePreset p;
  p.name = "adjusted";
  p.idm = IdmParams{};
  p.idm.headway = 1.0;
  p.idm.s0 = 2.0;
  p.idm.b_comf = 3.5;
  p.idm.stop_margin_pedestrian = 4.0;
  return p;
}

Forecast forecast_agents(const std::vector<VehicleState>& actors, double horizon, double dt,
                         const sim::VehicleParams& params) {
  Forecast out;
  out.dt = dt;
  const auto steps = static_cast<std::size_t>(std::lround(horizon / dt));
  out.tracks.reserve(actors.size());
  for (std::size_t i = 0; i < actors.size(); ++i) {
    Forecast::Track track;
    track.actor_index = i;
    track.boxes.reserve(steps + 1);
    VehicleState s = actors[i];
    track.boxes.push_back(s.footprint());
    for (std::size_t k = 0; k < steps; ++k) {
      switch (s.kind) {
        case ActorKind::pedestrian:
          s = sim::walk_step(s, dt);
          break;
        case ActorKind::static_obstacle:
          break;
        default:
          s = sim::bicycle_step(s, s.steering, s.acceleration_command, dt, params);
          break;
      }
      track.boxes.push_back(s.footprint());
    }
    out.tracks.push_back(std::move(track));
  }
  return out;
}

namespace {

double point_to_box_distance(Vec2 p, const OrientedBox& box) {
  const Vec2 local = box.center.to_local(p);
  const double dx = std::max(std::abs(local.x) - box.half_length, 0.0);
  const double dy = std::max(std::abs(local.y) - box.half_width, 0.0);
  return std::hypot(dx, dy);
}

}  // namespace

std::vector<LeaderCandidate> corridor_candidates(const VehicleState& ego,
                                                 const std::vector<VehicleState>& actors,
                                                 const Forecast& forecast,
                                                 const route::DensePath& path, double ego_arc,
                                                 const CorridorParams& params) {
  const geom::Polyline& line = path.polyline();
  const double reach = std::min(ego_arc + params.window, line.length());
  const double threshold = ego.width / 2.0 + params.margin;

  std::vector<std::pair<double, Vec2>> probes;
  for (double s = ego_arc; s <= reach; s += params.sample_step) {
    probes.emplace_back(s, line.point_at(s));
  }

  std::vector<LeaderCandidate> out;
  for (const auto& track : forecast.tracks) {
    // Coarse bound over the whole track, inflated by the corridor width,
    // discards most probes with two comparisons.
    double min_x = std::numeric_limits<double>::infinity();
    double max_x = -min_x;
    double min_y = min_x;
    double max_y = -min_x;
    for (const auto& box : track.boxes) {
      for (const Vec2 c : box.corners()) {
        min_x = std::min(min_x, c.x);
        max_x = std::max(max_x, c.x);
        min_y = std::min(min_y, c.y);
        max_y = std::max(max_y, c.y);
      }
    }
    min_x -= threshold;
    max_x += threshold;
    min_y -= threshold;
    max_y += threshold;

    double conflict_arc = std::numeric_limits<double>::infinity();
    bool now_inside = false;
    for (const auto& [s, probe] : probes) {
      if (probe.x < min_x || probe.x > max_x || probe.y < min_y || probe.y > max_y) continue;
      for (std::size_t k = 0; k < track.boxes.size(); ++k) {
        if (point_to_box_distance(probe, track.boxes[k]) <= threshold) {
          conflict_arc = s;
          now_inside = point_to_box_distance(probe, track.boxes[0]) <= threshold;
          break;
        }
      }
      if (std::isfinite(conflict_arc)) break;
    }
    if (!std::isfinite(conflict_arc)) continue;

    const VehicleState& actor = actors[track.actor_index];
    LeaderCandidate cand;
    cand.actor_index = track.actor_index;
    cand.conflict_arc = conflict_arc;
    // An actor already occupying the corridor acts as a conventional leader:
    // gap from bumper to body. A future crosser's gap runs to the point
    // where its forecast enters the corridor.
    cand.currently_in_corridor = now_inside;
    if (now_inside) {
      const auto proj = geom::project_onto_window(line, actor.pose.position(), conflict_arc,
                                                  params.window, params.window);
      cand.gap = proj.arc_length - ego_arc - ego.length / 2.0 - actor.length / 2.0;
    } else {
      cand.gap = conflict_arc - ego_arc - ego.length / 2.0;
    }
    const Vec2 velocity = actor.pose.heading() * actor.speed;
    cand.speed_along_path = velocity.dot(line.tangent_at(conflict_arc));
    out.push_back(cand);
  }

  std::sort(out.begin(), out.end(), [](const LeaderCandidate& a, const LeaderCandidate& b) {
    return a.conflict_arc < b.conflict_arc;
  });
  return out;
}

std::optional<std::size_t> select_leader(const VehicleState& ego,
                                         const std::vector<VehicleState>& actors,
                                         const Forecast& forecast, const route::DensePath& path,
                                         double ego_arc, const CorridorParams& params) {
  const auto candidates = corridor_candidates(ego, actors, forecast, path, ego_arc, params);
  if (candidates.empty()) return std::nullopt;
  return candidates.front().actor_index;
}

double idm_target_speed(double ego_speed, double gap, double leader_speed,
                        const IdmParams& params, double dt) {
  const double v = std::max(0.0, ego_speed);
  double accel;
  if (std::isinf(gap)) {
    accel = params.a_max * (1.0 - std::pow(v / params.v0_max, params.delta));
  } else {
    if (gap <= 0.0) return 0.0;
    const double dv = v - leader_speed;
    const double s_star =
        params.s0 +
        std::max(0.0, v * params.headway + v * dv / (2.0 * std::sqrt(params.a_max * params.b_comf)));
    accel = params.a_max *
            (1.0 - std::pow(v / params.v0_max, params.delta) - (s_star / gap) * (s_star / gap));
  }
  return std::clamp(v + accel * dt, 0.0, params.v0_max);
}

std::vector<OrientedBox> rollout_ego(const VehicleState& ego, const route::DensePath& path,
                                     double ego_arc, double target_speed, double horizon,
                                     double dt, const PlannerConfig& cfg) {
  const auto steps = static_cast<std::size_t>(std::lround(horizon / dt));
  std::vector<OrientedBox> boxes;
  boxes.reserve(steps + 1);

  VehicleState state = ego;
  double arc = ego_arc;
  ctrl::LateralPid pid(cfg.gains, cfg.vehicle.max_steer);
  boxes.push_back(state.footprint());
  for (std::size_t k = 0; k < steps; ++k) {
    const auto cps = ctrl::checkpoints_from_path(path.polyline(), state.pose, arc);
    const double steer = pid.step(ctrl::select_checkpoint(cps, state.speed * 3.6), dt);
    const auto pedals = ctrl::longitudinal_control(state.speed, target_speed, cfg.lon_model);
    const double accel =
        pedals.throttle * cfg.vehicle.throttle_accel - pedals.brake * cfg.vehicle.brake_decel;
    state = sim::bicycle_step(state, steer, accel, dt, cfg.vehicle);
    arc = geom::project_onto_window(path.polyline(), state.pose.position(), arc, 5.0, 10.0)
              .arc_length;
    boxes.push_back(state.footprint());
  }
  return boxes;
}

PlanResult plan(const VehicleState& ego, const std::vector<VehicleState>& actors,
                const route::DensePath& path, double ego_arc, const PlannerConfig& cfg,
                double dt) {
  PlanResult result;
  const Forecast forecast = forecast_agents(actors, cfg.horizon, dt, cfg.vehicle);
  const auto candidates =
      corridor_candidates(ego, actors, forecast, path, ego_arc, cfg.corridor);

  // Minimum over every corridor candidate, so adding an actor can only slow
  // the proposal.
  double proposal = idm_target_speed(ego.speed, std::numeric_limits<double>::infinity(), 0.0,
                                     cfg.idm, dt);
  if (!candidates.empty()) result.leader = candidates.front().actor_index;
  for (const auto& cand : candidates) {
    IdmParams params = cfg.idm;
    if (actors[cand.actor_index].kind == ActorKind::pedestrian) {
      params.s0 = cfg.idm.stop_margin_pedestrian;
    }
    proposal =
        std::min(proposal, idm_target_speed(ego.speed, cand.gap, cand.speed_along_path, params, dt));
  }
  result.proposal = proposal;

  if (proposal > 0.0) {
    const auto ego_boxes = rollout_ego(ego, path, ego_arc, proposal, cfg.horizon, dt, cfg);
    for (const auto& track : forecast.tracks) {
      const std::size_t n = std::min(ego_boxes.size(), track.boxes.size());
      for (std::size_t i = 0; i < n && !result.rejected; ++i) {
        if (geom::obb_intersects(ego_boxes[i], track.boxes[i])) result.rejected = true;
      }
      if (result.rejected) break;
    }
  }

  result.target_speed = result.rejected ? 0.0 : proposal;
  return result;
}

}  // namespace drivebench::plan
