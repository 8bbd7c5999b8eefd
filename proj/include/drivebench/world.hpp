#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "drivebench/geometry.hpp"
#include "drivebench/ledger.hpp"
#include "drivebench/planner.hpp"
#include "drivebench/route.hpp"
#include "drivebench/scenario.hpp"
#include "drivebench/vehicle.hpp"

namespace drivebench::sim {

struct EgoControl {
  double steer{0.0};
  double throttle{0.0};
  double brake{0.0};
};

struct TrafficLight {
  double arc{0.0};
  /// (red_seconds, green_seconds), repeated forever starting from red.
  double red_duration{20.0};
  double green_duration{3600.0};
  bool red_at(double time) const;
};

struct StopSign {
  double arc{0.0};
  bool satisfied{false};
  bool counted{false};
};

/// A non-ego participant. `behavior` selects which fields are live; every
/// actor is present from construction and integrates once per step in spawn
/// order. Actors with a trigger stay passive (standing walker, parked
/// vehicle) until the ego reaches `activation_arc` on the route or comes
/// within `trigger_radius` of `trigger_point`.
struct Actor {
  enum class Behavior { static_box, lane_follow, walker };

  VehicleState state;
  Behavior behavior{Behavior::static_box};
  bool triggered{false};
  double activation_arc{-1.0};
  geom::Vec2 trigger_point;
  double trigger_radius{-1.0};

  // lane_follow: cruise along `lane` at `cruise_speed`, yielding to whoever
  // blocks the lane ahead. The script fields briefly override the cruise
  // speed once the ego passes `script_trigger_arc` on the route.
  std::shared_ptr<geom::Polyline> lane;
  double lane_arc{0.0};
  double cruise_speed{0.0};
  double script_trigger_arc{-1.0};
  double script_slow_speed{0.0};
  double script_slow_duration{0.0};
  double script_elapsed{-1.0};

  // walker: walks straight along its heading for `walk_distance` metres
  // once triggered, then stands.
  double walk_speed{0.0};
  double walk_distance{0.0};
  double walked{0.0};
};

struct WorldParams {
  double dt{0.05};
  VehicleParams vehicle;
  double lane_width{3.5};
  /// Road speed limit drivers are expected to respect, m/s.
  double speed_limit{20.0};
  /// Speed below which the ego counts as standing still.
  double standstill_speed{0.1};
  /// Distance to the route end at which the route counts as completed.
  double completion_tolerance{0.5};
  plan::IdmParams background_idm;
};

/// Closed-loop scene: one ego on a dense route, scripted hazards, traffic
/// lights, stop signs, and an infraction ledger. Stepping is deterministic
/// for a fixed (route, scenarios, seed, dt).
class World {
 public:
  World(route::DensePath path, std::vector<ScenarioSpec> scenarios, std::uint64_t seed,
        WorldParams params = {});

  /// Advances one tick: lights, scenario triggers, background actors, the
  /// ego, then infraction detection on the post-move state.
  void step(const EgoControl& control);

  const route::DensePath& path() const { return path_; }
  const WorldParams& params() const { return params_; }
  const VehicleState& ego() const { return ego_; }
  double ego_arc() const { return ego_arc_; }
  double time() const { return time_; }
  std::uint64_t seed() const { return seed_; }

  const std::vector<Actor>& actors() const { return actors_; }
  /// Snapshot of actor states for the planner, index-aligned with actors().
  std::vector<VehicleState> actor_states() const;
  const std::vector<TrafficLight>& lights() const { return lights_; }
  const std::vector<StopSign>& stop_signs() const { return stop_signs_; }

  const InfractionLedger& ledger() const { return ledger_; }
  InfractionLedger& mutable_ledger() { return ledger_; }
  /// Infraction tags raised by the most recent step.
  const std::vector<std::string>& step_events() const { return step_events_; }

  bool completed() const;
  /// Smallest ego-to-pedestrian footprint distance seen so far.
  double min_pedestrian_gap() const { return min_pedestrian_gap_; }
  /// Same, restricted to steps where the ego stood still.
  double min_pedestrian_gap_stopped() const { return min_pedestrian_gap_stopped_; }

  void add_traffic_light(const TrafficLight& light);
  void add_stop_sign(double arc);
  void add_actor(const Actor& actor);
  void add_hazard(const HazardSpec& hazard);

 private:
  void build_scenario(const ScenarioSpec& spec, std::size_t index);
  void process_triggers();
  void advance_background();
  void advance_ego(const EgoControl& control);
  void detect_collisions();
  void detect_line_infractions(double previous_front_arc);
  void apply_hazards();
  double jitter(std::size_t scenario_index, const std::string& key, double half_range) const;

  route::DensePath path_;
  WorldParams params_;
  std::uint64_t seed_;
  VehicleState ego_;
  double ego_arc_{0.0};
  double time_{0.0};

  std::vector<Actor> actors_;
  std::vector<TrafficLight> lights_;
  std::vector<StopSign> stop_signs_;
  std::vector<char> in_contact_;

  struct HazardTrack {
    HazardSpec spec;
    double next_km{0.0};
    std::uint64_t draws{0};
  };
  std::vector<HazardTrack> hazards_;

  InfractionLedger ledger_;
  std::vector<std::string> step_events_;
  double min_pedestrian_gap_{1e18};
  double min_pedestrian_gap_stopped_{1e18};
};

}  // namespace drivebench::sim
