#include "drivebench/vehicle.hpp"

#include <algorithm>
#include <cmath>

namespace drivebench::sim {

VehicleState bicycle_step(const VehicleState& state, double steer, double accel, double dt,
                          const VehicleParams& params) {
  VehicleState next = state;
  const double clamped_steer = std::clamp(steer, -params.max_steer, params.max_steer);
  const double yaw_rate = state.speed / params.wheelbase * std::tan(clamped_steer);

  const double yaw = state.pose.yaw;
  if (std::abs(yaw_rate) < 1e-9) {
    next.pose = geom::Pose2D(state.pose.x + state.speed * dt * std::cos(yaw),
                             state.pose.y + state.speed * dt * std::sin(yaw), yaw);
  } else {
    const double radius = state.speed / yaw_rate;
    const double new_yaw = yaw + yaw_rate * dt;
    next.pose = geom::Pose2D(state.pose.x + radius * (std::sin(new_yaw) - std::sin(yaw)),
                             state.pose.y + radius * (std::cos(yaw) - std::cos(new_yaw)), new_yaw);
  }

  next.speed = std::max(0.0, state.speed + accel * dt);
  next.steering = clamped_steer;
  next.acceleration_command = accel;
  return next;
}

VehicleState walk_step(const VehicleState& state, double dt) {
  VehicleState next = state;
  const geom::Vec2 step = state.pose.heading() * (state.speed * dt);
  next.pose = geom::Pose2D(state.pose.x + step.x, state.pose.y + step.y, state.pose.yaw);
  return next;
}

}  // namespace drivebench::sim
