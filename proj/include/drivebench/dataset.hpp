#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "drivebench/frame_log.hpp"

namespace drivebench::data {

/// Target-speed classes in m/s. 13.89 and 17.78 are 50 and 64 km/h.
inline constexpr std::size_t kClassCount = 8;
inline constexpr std::array<double, kClassCount> kClassValues = {
    0.0, 4.0, 8.0, 10.0, 13.89, 16.0, 17.78, 20.0};

/// Probability vector with mass split across the two classes bracketing a
/// continuous speed. Sums to one; at most two adjacent entries are nonzero.
struct TwoHotLabel {
  std::array<double, kClassCount> weights{};
};

/// Splits v between the nearest classes in proportion to proximity; exact
/// class values become one-hot. v is clamped to [0, 20] first.
TwoHotLabel encode_two_hot(double v);

/// Expectation of the class values under the label weights. Throws
/// std::invalid_argument when the label violates its invariants.
double decode_two_hot(const TwoHotLabel& label);

struct ClassWeights {
  std::array<double, kClassCount> weights{};
};

/// Anti-proportional weights w_c = N / (K n_c) with N the total count, so
/// the weighted count sum stays N. Throws on an absent class.
ClassWeights class_weights(const std::array<std::uint64_t, kClassCount>& counts);

struct FilterParams {
  double dv{0.1};          // target-speed change threshold, m/s
  double dangle_deg{0.5};  // checkpoint bearing change threshold, degrees
  double keep_frac{0.14};  // retention probability for non-change frames
};

struct FilterStats {
  std::size_t total{0};
  std::size_t change{0};  // change frames, excluding each route's first frame
  std::size_t kept{0};
  double change_fraction{0.0};
  double kept_fraction{0.0};
};

/// A frame is a change frame when its target speed moves by more than dv or
/// any checkpoint's ego-frame bearing moves by more than dangle against the
/// previous frame of the same route. Change frames and each route's first
/// frame are always kept; the rest survive with probability keep_frac,
/// decided per frame from (seed, route_id, frame_index) so the outcome does
/// not depend on processing order.
std::pair<std::vector<FrameRecord>, FilterStats> filter_frames(
    const std::vector<FrameRecord>& log, const FilterParams& params, std::uint64_t seed);

/// Change flags alone, one per input frame. Independent of seed and
/// keep_frac by construction; a route's first frame reads false.
std::vector<bool> change_flags(const std::vector<FrameRecord>& log, const FilterParams& params);

}  // namespace drivebench::data
