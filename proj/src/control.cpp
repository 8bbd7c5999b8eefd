#include "drivebench/control.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drivebench::ctrl {

double lookahead_distance(double speed_kmh) { return 0.098 * speed_kmh + 0.192; }

std::size_t checkpoint_index(double speed_kmh) {
  const double d = lookahead_distance(speed_kmh);
  if (d < Checkpoints::kFirstDistance) return 0;
  const auto k = static_cast<std::size_t>(std::floor(d - Checkpoints::kFirstDistance));
  return std::min(k, Checkpoints::kCount - 1);
}

geom::Vec2 select_checkpoint(const Checkpoints& cps, double speed_kmh) {
  return cps.points[checkpoint_index(speed_kmh)];
}

Checkpoints checkpoints_from_path(const geom::Polyline& path, const geom::Pose2D& ego,
                                  double ego_arc) {
  Checkpoints cps;
  for (std::size_t k = 0; k < Checkpoints::kCount; ++k) {
    const geom::Vec2 world = path.point_at(ego_arc + Checkpoints::nominal_distance(k));
    cps.points[k] = ego.to_local(world);
  }
  return cps;
}

double LateralPid::step(geom::Vec2 target_in_ego, double dt) {
  const double error = std::atan2(target_in_ego.y, target_in_ego.x);
  const double derivative = has_previous_ ? (error - previous_error_) / dt : 0.0;
  const double candidate_integral = integral_ + error * dt;

  const double raw = gains_.kp * error + gains_.ki * candidate_integral + gains_.kd * derivative;
  const double out = std::clamp(raw, -max_steer_, max_steer_);
  if (raw == out) integral_ = candidate_integral;

  previous_error_ = error;
  has_previous_ = true;
  return out;
}

void LateralPid::reset() {
  integral_ = 0.0;
  previous_error_ = 0.0;
  has_previous_ = false;
}

double LonModel::evaluate(double v, double v_target) const {
  const double u = coef[0] + coef[1] * v + coef[2] * v_target + coef[3] * (v_target - v);
  return std::clamp(u, -1.0, 1.0);
}

PedalCommand longitudinal_control(double v, double v_target, const LonModel& model) {
  if (v_target < 1e-2) {
    // Commanded stop: never creep, hold the brake firmly near standstill.
    const double u = model.evaluate(v, 0.0);
    return {0.0, std::clamp(std::max(0.3, -u), 0.0, 1.0)};
  }
  const double u = model.evaluate(v, v_target);
  if (u >= 0.0) return {u, 0.0};
  return {0.0, -u};
}

LonFit fit_lon_model(const std::vector<LonSample>& samples) {
  if (samples.size() < 4) throw std::invalid_argument("need at least 4 samples");
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, 4);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = s.v;
    design(i, 2) = s.v_target;
    design(i, 3) = s.v_target - s.v;
    target(i) = s.u;
  }

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  // The fourth feature is a linear combination of the others, so a spanning
  // sample set reaches rank 3, never 4.
  if (cod.rank() < 3) throw std::invalid_argument("design matrix rank-deficient");

  const Eigen::VectorXd coef = cod.solve(target);
  LonFit fit;
  for (int i = 0; i < 4; ++i) fit.model.coef[static_cast<std::size_t>(i)] = coef(i);
  fit.residual_rms = std::sqrt((design * coef - target).squaredNorm() / static_cast<double>(n));
  return fit;
}

LonModel default_lon_model() {
  // Bang-bang-with-slew reference: u = clamp(gain * (v_t - v), -1, 1) with a
  // proportional band of ~0.3 m/s. Sampled on the operating envelope, with
  // the coast line duplicated so the fit pins u ~ 0 at v = v_target.
  constexpr double kGain = 3.5;
  std::vector<LonSample> samples;
  for (int vi = 0; vi <= 44; ++vi) {
    const double v = 0.5 * vi;
    for (int di = -6; di <= 6; ++di) {
      const double delta = 0.05 * di;
      const double vt = v + delta;
      if (vt < 0.0 || vt > 22.0) continue;
      samples.push_back({v, vt, std::clamp(kGain * delta, -1.0, 1.0)});
    }
    samples.push_back({v, v, 0.0});
    samples.push_back({v, v, 0.0});
  }
  return fit_lon_model(samples).model;
}

}  // namespace drivebench::ctrl
