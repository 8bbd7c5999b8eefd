#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "drivebench/geometry.hpp"

namespace drivebench::ctrl {

/// Path points in the ego frame; point k sits at nominal arc distance
/// (2.5 + k) m ahead along the route.
struct Checkpoints {
  static constexpr std::size_t kCount = 10;
  static constexpr double kFirstDistance = 2.5;
  std::array<geom::Vec2, kCount> points{};

  static double nominal_distance(std::size_t k) {
    return kFirstDistance + static_cast<double>(k);
  }
};

/// Dynamic lookahead d = 0.098 v + 0.192 with v in km/h.
double lookahead_distance(double speed_kmh);

/// Largest checkpoint whose nominal distance does not exceed the lookahead;
/// clamps to the first checkpoint below 2.5 m.
std::size_t checkpoint_index(double speed_kmh);
geom::Vec2 select_checkpoint(const Checkpoints& cps, double speed_kmh);

/// Ground-truth checkpoints read off the dense path at the ego's projected
/// arc position.
Checkpoints checkpoints_from_path(const geom::Polyline& path, const geom::Pose2D& ego,
                                  double ego_arc);

struct PidGains {
  double kp{1.0};
  double ki{0.02};
  double kd{0.1};
};

/// PID on the bearing to the target point. The integrator freezes while the
/// output is clamped.
class LateralPid {
 public:
  explicit LateralPid(PidGains gains = {}, double max_steer = 1.0)
      : gains_(gains), max_steer_(max_steer) {}

  double step(geom::Vec2 target_in_ego, double dt);
  void reset();

 private:
  PidGains gains_;
  double max_steer_;
  double integral_{0.0};
  double previous_error_{0.0};
  bool has_previous_{false};
};

/// Linear map from (speed, target speed) to a signed pedal command over the
/// features [1, v, v_t, v_t - v]. The last feature is a difference of the
/// middle two, so the basis spans a 3-dimensional space and coefficients
/// are stored in minimum-norm form.
struct LonModel {
  std::array<double, 4> coef{};

  /// Signed command clamped to [-1, 1]; positive drives, negative brakes.
  double evaluate(double v, double v_target) const;
};

struct PedalCommand {
  double throttle{0.0};
  double brake{0.0};
};

/// Splits the model output into pedals; never both nonzero. A near-zero
/// target holds the brake instead of creeping forward.
PedalCommand longitudinal_control(double v, double v_target, const LonModel& model);

struct LonSample {
  double v{0.0};
  double v_target{0.0};
  double u{0.0};
};

struct LonFit {
  LonModel model;
  double residual_rms{0.0};
};

/// Minimum-norm least squares over the 4-feature basis. Throws when the
/// samples do not span the basis's 3-dimensional effective space.
LonFit fit_lon_model(const std::vector<LonSample>& samples);

/// Model fitted to a deterministic bang-bang-with-slew reference: saturate
/// far from the target speed, proportional inside a narrow band.
LonModel default_lon_model();

}  // namespace drivebench::ctrl
