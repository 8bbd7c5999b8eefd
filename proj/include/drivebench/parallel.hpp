#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "drivebench/dataset.hpp"
#include "drivebench/driver.hpp"
#include "drivebench/geometry.hpp"
#include "drivebench/metrics.hpp"
#include "drivebench/suite.hpp"

// OpenMP kernels for the throughput-bound paths. Every kernel has a serial
// reference with identical output; the bench binary times the two and the
// tests assert bitwise equality.
namespace drivebench::par {

struct SuiteRunConfig {
  plan::StylePreset preset = plan::default_preset();
  sim::WorldParams world;
  sim::RunLimits limits;
  std::uint64_t seed{0};
};

struct RouteOutcome {
  std::string route_id;
  sim::RouteResult result;
};

/// Per-route stream derivation from the suite seed; documented so partial
/// re-runs reproduce full-run outputs route by route.
std::uint64_t route_seed(std::uint64_t suite_seed, const std::string& route_id);

/// Runs every route of a suite with its own world and expert driver.
/// Outcomes are ordered by route id regardless of completion order.
std::vector<RouteOutcome> run_suite(const std::vector<sim::SuiteRoute>& routes,
                                    const SuiteRunConfig& config);
std::vector<RouteOutcome> run_suite_serial(const std::vector<sim::SuiteRoute>& routes,
                                           const SuiteRunConfig& config);

/// Same contract and output as data::filter_frames; the per-frame bearing
/// extraction and retention draws run across threads.
std::pair<std::vector<data::FrameRecord>, data::FilterStats> filter_frames_parallel(
    const std::vector<data::FrameRecord>& log, const data::FilterParams& params,
    std::uint64_t seed);

struct GridMax {
  double x{0.0};
  double ds{0.0};
};

/// Argmax of expected_ds over the uniform grid {i/steps}. Exact ties keep
/// the smallest x, which makes the chunked reduction independent of the
/// thread count and bitwise equal to the serial scan.
GridMax grid_max_expected_ds(double coefficient, double length_km, std::int64_t steps);
GridMax grid_max_expected_ds_serial(double coefficient, double length_km, std::int64_t steps);

using BoxPair = std::pair<geom::OrientedBox, geom::OrientedBox>;

std::vector<std::uint8_t> obb_intersect_batch(const std::vector<BoxPair>& pairs);
std::vector<std::uint8_t> obb_intersect_batch_serial(const std::vector<BoxPair>& pairs);

}  // namespace drivebench::par
