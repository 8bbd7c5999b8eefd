#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drivebench/control.hpp"
#include "drivebench/geometry.hpp"
#include "drivebench/route.hpp"
#include "drivebench/vehicle.hpp"

namespace drivebench::plan {

struct IdmParams {
  double v0_max{20.0};  // m/s, 72 km/h cap
  double headway{1.5};  // desired time headway T, s
  double s0{4.0};       // minimum gap, m
  double a_max{2.5};    // m/s^2
  double b_comf{2.0};   // comfortable decel, m/s^2
  double delta{4.0};    // free-accel exponent
  double stop_margin_pedestrian{4.0};  // replaces s0 against pedestrians
  double b_emergency{6.0};  // decel bound for virtual stop targets, m/s^2
};

struct StylePreset {
  std::string name;
  IdmParams idm;
};

/// Early-braking baseline behavior.
StylePreset default_preset();
/// Later, sharper braking: shorter headway, smaller gap, higher b_comf.
StylePreset adjusted_preset();

/// Per-actor footprint sequences at fixed dt over the horizon; box 0 is the
/// actor's current footprint.
struct Forecast {
  struct Track {
    std::size_t actor_index{0};
    std::vector<geom::OrientedBox> boxes;
  };
  std::vector<Track> tracks;
  double dt{0.05};
};

/// Integrates every actor forward holding its last controls: vehicles via
/// the bicycle model, pedestrians at constant velocity, static obstacles in
/// place.
Forecast forecast_agents(const std::vector<sim::VehicleState>& actors, double horizon,
                         double dt, const sim::VehicleParams& params = {});

struct LeaderCandidate {
  std::size_t actor_index{0};
  double conflict_arc{0.0};  // path arc of first corridor contact
  double gap{0.0};           // ego front bumper to the conflict, m
  double speed_along_path{0.0};
  bool currently_in_corridor{false};
};

struct CorridorParams {
  double margin{0.5};    // beyond ego half-width
  double window{64.0};   // lookahead along the path, m
  double sample_step{0.5};
};

/// Every actor whose forecast enters the ego's path corridor ahead of
/// ego_arc, ordered by conflict arc.
std::vector<LeaderCandidate> corridor_candidates(const sim::VehicleState& ego,
                                                 const std::vector<sim::VehicleState>& actors,
                                                 const Forecast& forecast,
                                                 const route::DensePath& path, double ego_arc,
                                                 const CorridorParams& params = {});

/// Nearest corridor candidate by arc length, if any.
std::optional<std::size_t> select_leader(const sim::VehicleState& ego,
                                         const std::vector<sim::VehicleState>& actors,
                                         const Forecast& forecast, const route::DensePath& path,
                                         double ego_arc, const CorridorParams& params = {});

/// One IDM step: a = a_max [1 - (v/v0)^delta - (s*/gap)^2] with
/// s* = s0 + max(0, vT + v dv / (2 sqrt(a_max b_comf))). Returns
/// clamp(v + a dt, 0, v0); a non-positive gap returns 0. Free road is
/// gap = +infinity.
double idm_target_speed(double ego_speed, double gap, double leader_speed,
                        const IdmParams& params, double dt);

struct PlannerConfig {
  IdmParams idm;
  CorridorParams corridor;
  double horizon{2.0};
  sim::VehicleParams vehicle;
  ctrl::PidGains gains;
  ctrl::LonModel lon_model;
};

/// Closed-loop ego prediction: the same lateral PID and longitudinal model
/// the ego actually runs, tracking target_speed along the path. Returns
/// horizon/dt + 1 footprints, the first being the current one.
std::vector<geom::OrientedBox> rollout_ego(const sim::VehicleState& ego,
                                           const route::DensePath& path, double ego_arc,
                                           double target_speed, double horizon, double dt,
                                           const PlannerConfig& cfg);

struct PlanResult {
  double target_speed{0.0};
  double proposal{0.0};  // IDM value before the intersection check
  bool rejected{false};
  std::optional<std::size_t> leader;
};

/// Stages 2-5: forecast, IDM proposal against the minimum over all corridor
/// candidates, bicycle rollout, and time-aligned intersection check that
/// rejects the proposal to exactly 0.
PlanResult plan(const sim::VehicleState& ego, const std::vector<sim::VehicleState>& actors,
                const route::DensePath& path, double ego_arc, const PlannerConfig& cfg,
                double dt);

}  // namespace drivebench::plan
