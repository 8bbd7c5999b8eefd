#include "drivebench/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "drivebench/rng.hpp"

namespace drivebench::data {

TwoHotLabel encode_two_hot(double v) {
  v = std::clamp(v, kClassValues.front(), kClassValues.back());
  TwoHotLabel label;
  for (std::size_t c = 0; c < kClassCount; ++c) {
    if (v == kClassValues[c]) {
      label.weights[c] = 1.0;
      return label;
    }
  }
  std::size_t hi = 1;
  while (kClassValues[hi] < v) ++hi;
  const std::size_t lo = hi - 1;
  const double span = kClassValues[hi] - kClassValues[lo];
  label.weights[lo] = (kClassValues[hi] - v) / span;
  label.weights[hi] = (v - kClassValues[lo]) / span;
  return label;
}

double decode_two_hot(const TwoHotLabel& label) {
  double sum = 0.0;
  std::size_t first_nonzero = kClassCount;
  std::size_t last_nonzero = 0;
  std::size_t nonzero = 0;
  for (std::size_t c = 0; c < kClassCount; ++c) {
    const double w = label.weights[c];
    if (w < 0.0) throw std::invalid_argument("two-hot label: negative weight");
    sum += w;
    if (w > 0.0) {
      ++nonzero;
      first_nonzero = std::min(first_nonzero, c);
      last_nonzero = std::max(last_nonzero, c);
    }
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("two-hot label: weights do not sum to 1");
  if (nonzero > 2) throw std::invalid_argument("two-hot label: more than two nonzero weights");
  if (nonzero == 2 && last_nonzero != first_nonzero + 1)
    throw std::invalid_argument("two-hot label: nonzero weights not adjacent");
  double value = 0.0;
  for (std::size_t c = 0; c < kClassCount; ++c) value += label.weights[c] * kClassValues[c];
  return value;
}

ClassWeights class_weights(const std::array<std::uint64_t, kClassCount>& counts) {
  double total = 0.0;
  for (std::size_t c = 0; c < kClassCount; ++c) {
    if (counts[c] == 0)
      throw std::invalid_argument("class_weights: class " + std::to_string(c) + " has zero count");
    total += static_cast<double>(counts[c]);
  }
  ClassWeights weights;
  for (std::size_t c = 0; c < kClassCount; ++c)
    weights.weights[c] = total / (static_cast<double>(kClassCount) * static_cast<double>(counts[c]));
  return weights;
}

namespace {

std::array<double, ctrl::Checkpoints::kCount> checkpoint_bearings(const FrameRecord& frame) {
  std::array<double, ctrl::Checkpoints::kCount> bearings;
  for (std::size_t k = 0; k < ctrl::Checkpoints::kCount; ++k) {
    const geom::Vec2 p = frame.checkpoints.points[k];
    bearings[k] = std::atan2(p.y, p.x);
  }
  return bearings;
}

bool is_change(const FrameRecord& previous, const FrameRecord& current, const FilterParams& params) {
  if (std::abs(current.target_speed - previous.target_speed) > params.dv) return true;
  const double threshold = params.dangle_deg * geom::kPi / 180.0;
  const auto before = checkpoint_bearings(previous);
  const auto after = checkpoint_bearings(current);
  for (std::size_t k = 0; k < ctrl::Checkpoints::kCount; ++k) {
    if (std::abs(geom::normalize_angle(after[k] - before[k])) > threshold) return true;
  }
  return false;
}

}  // namespace

std::vector<bool> change_flags(const std::vector<FrameRecord>& log, const FilterParams& params) {
  std::vector<bool> flags(log.size(), false);
  std::unordered_map<std::string, std::size_t> previous_by_route;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto it = previous_by_route.find(log[i].route_id);
    if (it != previous_by_route.end()) flags[i] = is_change(log[it->second], log[i], params);
    previous_by_route[log[i].route_id] = i;
  }
  return flags;
}

std::pair<std::vector<FrameRecord>, FilterStats> filter_frames(
    const std::vector<FrameRecord>& log, const FilterParams& params, std::uint64_t seed) {
  const std::vector<bool> flags = change_flags(log, params);
  std::vector<FrameRecord> kept;
  FilterStats stats;
  stats.total = log.size();
  std::unordered_map<std::string, bool> seen_route;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const FrameRecord& frame = log[i];
    const bool route_first = !std::exchange(seen_route[frame.route_id], true);
    bool keep = route_first || flags[i];
    if (flags[i]) ++stats.change;
    if (!keep) {
      const std::uint64_t route_seed = rng::combine(seed, rng::hash_string(frame.route_id));
      keep = rng::uniform01(route_seed, frame.frame_index) < params.keep_frac;
    }
    if (keep) kept.push_back(frame);
  }
  stats.kept = kept.size();
  if (stats.total > 0) {
    stats.change_fraction = static_cast<double>(stats.change) / static_cast<double>(stats.total);
    stats.kept_fraction = static_cast<double>(stats.kept) / static_cast<double>(stats.total);
  }
  return {std::move(kept), stats};
}

}  // namespace drivebench::data
