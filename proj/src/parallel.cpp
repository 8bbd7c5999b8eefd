#include "drivebench/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "drivebench/rng.hpp"

namespace drivebench::par {

std::uint64_t route_seed(std::uint64_t suite_seed, const std::string& route_id) {
  return rng::combine(suite_seed, rng::hash_string(route_id));
}

namespace {

std::vector<RouteOutcome> run_suite_impl(const std::vector<sim::SuiteRoute>& routes,
                                         const SuiteRunConfig& config, bool parallel) {
  std::vector<std::size_t> order(routes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return routes[a].id < routes[b].id; });
  std::vector<RouteOutcome> outcomes(routes.size());
  const auto n = static_cast<std::int64_t>(routes.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    const sim::SuiteRoute& route = routes[order[static_cast<std::size_t>(i)]];
    sim::World world = sim::build_world(route, route_seed(config.seed, route.id), config.world);
    sim::ExpertDriver driver(config.preset, world.params());
    outcomes[static_cast<std::size_t>(i)] = {
        route.id, sim::run_route(world, driver, config.limits, route.id)};
  }
  return outcomes;
}

}  // namespace

std::vector<RouteOutcome> run_suite(const std::vector<sim::SuiteRoute>& routes,
                                    const SuiteRunConfig& config) {
  return run_suite_impl(routes, config, true);
}

std::vector<RouteOutcome> run_suite_serial(const std::vector<sim::SuiteRoute>& routes,
                                           const SuiteRunConfig& config) {
  return run_suite_impl(routes, config, false);
}

std::pair<std::vector<data::FrameRecord>, data::FilterStats> filter_frames_parallel(
    const std::vector<data::FrameRecord>& log, const data::FilterParams& params,
    std::uint64_t seed) {
  const auto n = static_cast<std::int64_t>(log.size());
  // Heavy per-frame work first: checkpoint bearings and retention draws are
  // pure functions of one frame, so they spread across threads.
  std::vector<std::array<double, ctrl::Checkpoints::kCount>> bearings(log.size());
  std::vector<std::uint8_t> drawn(log.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    for (std::size_t k = 0; k < ctrl::Checkpoints::kCount; ++k) {
      const geom::Vec2 p = log[idx].checkpoints.points[k];
      bearings[idx][k] = std::atan2(p.y, p.x);
    }
    const std::uint64_t route_seed_value = rng::combine(seed, rng::hash_string(log[idx].route_id));
    drawn[idx] = rng::uniform01(route_seed_value, log[idx].frame_index) < params.keep_frac ? 1 : 0;
  }
  // Cheap sequential pass: previous-frame lookups and the kept list.
  const double threshold = params.dangle_deg * geom::kPi / 180.0;
  std::vector<data::FrameRecord> kept;
  data::FilterStats stats;
  stats.total = log.size();
  std::unordered_map<std::string, std::size_t> previous_by_route;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const data::FrameRecord& frame = log[i];
    const auto it = previous_by_route.find(frame.route_id);
    const bool route_first = it == previous_by_route.end();
    bool change = false;
    if (!route_first) {
      const std::size_t prev = it->second;
      change = std::abs(frame.target_speed - log[prev].target_speed) > params.dv;
      for (std::size_t k = 0; !change && k < ctrl::Checkpoints::kCount; ++k)
        change = std::abs(geom::normalize_angle(bearings[i][k] - bearings[prev][k])) > threshold;
    }
    previous_by_route[frame.route_id] = i;
    if (change) ++stats.change;
    if (route_first || change || drawn[i]) kept.push_back(frame);
  }
  stats.kept = kept.size();
  if (stats.total > 0) {
    stats.change_fraction = static_cast<double>(stats.change) / static_cast<double>(stats.total);
    stats.kept_fraction = static_cast<double>(stats.kept) / static_cast<double>(stats.total);
  }
  return {std::move(kept), stats};
}

namespace {

GridMax scan_range(double coefficient, double length_km, std::int64_t steps, std::int64_t lo,
                   std::int64_t hi) {
  GridMax best{0.0, -std::numeric_limits<double>::infinity()};
  for (std::int64_t i = lo; i < hi; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(steps);
    const double ds = metrics::expected_ds(x, coefficient, length_km);
    if (ds > best.ds) best = {x, ds};
  }
  return best;
}

}  // namespace

GridMax grid_max_expected_ds_serial(double coefficient, double length_km, std::int64_t steps) {
  return scan_range(coefficient, length_km, steps, 0, steps + 1);
}

GridMax grid_max_expected_ds(double coefficient, double length_km, std::int64_t steps) {
  const std::int64_t n = steps + 1;
  const int threads = omp_get_max_threads();
  std::vector<GridMax> parts(static_cast<std::size_t>(threads),
                             {0.0, -std::numeric_limits<double>::infinity()});
#pragma omp parallel num_threads(threads)
  {
    const auto t = static_cast<std::int64_t>(omp_get_thread_num());
    const std::int64_t lo = n * t / threads;
    const std::int64_t hi = n * (t + 1) / threads;
    parts[static_cast<std::size_t>(t)] = scan_range(coefficient, length_km, steps, lo, hi);
  }
  // Chunks merge in index order with strict >, so ties keep the smallest x
  // exactly as the serial left-to-right scan does.
  GridMax best{0.0, -std::numeric_limits<double>::infinity()};
  for (const GridMax& part : parts)
    if (part.ds > best.ds) best = part;
  return best;
}

std::vector<std::uint8_t> obb_intersect_batch_serial(const std::vector<BoxPair>& pairs) {
  std::vector<std::uint8_t> hits(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i)
    hits[i] = geom::obb_intersects(pairs[i].first, pairs[i].second) ? 1 : 0;
  return hits;
}

std::vector<std::uint8_t> obb_intersect_batch(const std::vector<BoxPair>& pairs) {
  std::vector<std::uint8_t> hits(pairs.size());
  const auto n = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    hits[idx] = geom::obb_intersects(pairs[idx].first, pairs[idx].second) ? 1 : 0;
  }
  return hits;
}

}  // namespace drivebench::par
