#pragma once

#include "drivebench/geometry.hpp"

namespace drivebench::sim {

enum class ActorKind {
  ego,
  background_vehicle,
  pedestrian,
  static_obstacle,
  emergency_vehicle,
};

struct VehicleParams {
  double wheelbase{2.85};
  double max_steer{1.0};       // rad
  double throttle_accel{4.0};  // m/s^2 at full throttle
  double brake_decel{8.0};     // m/s^2 at full brake
};

struct VehicleState {
  geom::Pose2D pose;
  double speed{0.0};                 // m/s, never negative
  double steering{0.0};              // rad, last applied
  double acceleration_command{0.0};  // m/s^2, last applied
  double length{4.9};
  double width{2.12};
  ActorKind kind{ActorKind::background_vehicle};

  geom::OrientedBox footprint() const {
    return {pose, length / 2.0, width / 2.0};
  }
};

/// One kinematic bicycle step. The pose advances the current speed along an
/// exact circular arc of radius wheelbase / tan(steer) (straight below a
/// tiny yaw rate), so constant controls reproduce the analytic
/// constant-turn-rate trajectory with no integration drift. Speed then
/// integrates the commanded acceleration, clamped at zero.
VehicleState bicycle_step(const VehicleState& state, double steer, double accel, double dt,
                          const VehicleParams& params);

/// Constant-velocity step used for pedestrians.
VehicleState walk_step(const VehicleState& state, double dt);

}  // namespace drivebench::sim
