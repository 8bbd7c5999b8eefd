#pragma once

#include <string>
#include <vector>

#include "drivebench/control.hpp"
#include "drivebench/frame_log.hpp"
#include "drivebench/planner.hpp"
#include "drivebench/world.hpp"

namespace drivebench::sim {

class Driver {
 public:
  virtual ~Driver() = default;
  virtual EgoControl act(const World& world) = 0;
  /// Planned target speed behind the last act(), logged as the frame label.
  virtual double last_target_speed() const = 0;
};

/// Rule-based driver: the corridor planner handles moving hazards, and
/// virtual stop targets (v = sqrt(2 b gap)) handle red lights, unserved
/// stop signs, and the route end.
class ExpertDriver : public Driver {
 public:
  explicit ExpertDriver(const plan::StylePreset& preset, const WorldParams& world_params = {});

  EgoControl act(const World& world) override;
  double last_target_speed() const override { return last_target_; }
  const plan::PlannerConfig& config() const { return config_; }

 private:
  plan::PlannerConfig config_;
  ctrl::LateralPid pid_;
  double last_target_{0.0};
};

struct RunLimits {
  double route_timeout{-1.0};    // s; < 0 derives 3 L / 5 from the route length
  double blocked_timeout{90.0};  // s standing still before giving up
  double early_stop_km{-1.0};    // deliberate stop after this distance; < 0 = off
};

struct RouteResult {
  InfractionLedger ledger;
  std::vector<data::FrameRecord> frames;
  double min_pedestrian_gap{1e18};
  double min_pedestrian_gap_stopped{1e18};
  bool completed{false};
};

/// Closed loop until completion, route timeout, standstill timeout, or the
/// deliberate early stop (which brakes the ego, relabels the frame 0, and
/// counts no timeout). Each frame is recorded with the pre-step state; a
/// driver exception marks the ledger aborted and keeps the partial log.
RouteResult run_route(World& world, Driver& driver, const RunLimits& limits = {},
                      const std::string& route_id = "route");

}  // namespace drivebench::sim
