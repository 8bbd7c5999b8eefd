#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "drivebench/parallel.hpp"
#include "drivebench/rng.hpp"

// Times every OpenMP kernel against its serial reference on a fixed
// workload and verifies the outputs agree.

using namespace drivebench;
using Clock = std::chrono::steady_clock;

namespace {

double run_timed(const std::function<void()>& body) {
  const auto start = Clock::now();
  body();
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void report(const char* kernel, double serial_ms, double parallel_ms, bool match) {
  std::printf("%-22s %10.1f ms %10.1f ms %7.2fx   %s\n", kernel, serial_ms, parallel_ms,
              serial_ms / parallel_ms, match ? "outputs match" : "OUTPUTS DIFFER");
}

std::vector<data::FrameRecord> synthetic_log(std::size_t frames_per_route, int routes) {
  std::vector<data::FrameRecord> log;
  rng::Stream stream(rng::combine(11, 4));
  for (int r = 0; r < routes; ++r) {
    const std::string id = "bench-route-" + std::to_string(r);
    double target = stream.uniform(0.0, 20.0);
    for (std::size_t i = 0; i < frames_per_route; ++i) {
      if (stream.uniform() < 0.05) target = stream.uniform(0.0, 20.0);
      data::FrameRecord frame;
      frame.route_id = id;
      frame.frame_index = i;
      frame.sim_time = 0.05 * static_cast<double>(i);
      frame.ego_speed = target;
      frame.target_speed = target;
      for (std::size_t k = 0; k < ctrl::Checkpoints::kCount; ++k) {
        const double d = ctrl::Checkpoints::nominal_distance(k);
        const double bearing = stream.uniform() < 0.02 ? stream.uniform(-0.05, 0.05) : 0.0;
        frame.checkpoints.points[k] = {d * std::cos(bearing), d * std::sin(bearing)};
      }
      log.push_back(frame);
    }
  }
  return log;
}

void bench_grid_argmax() {
  constexpr int kCells = 20;
  constexpr std::int64_t kSteps = 100000;
  std::vector<par::GridMax> serial;
  std::vector<par::GridMax> parallel;
  const auto sweep = [&](std::vector<par::GridMax>& out, auto&& kernel) {
    out.clear();
    for (int i = 0; i < kCells; ++i) {
      for (int j = 0; j < kCells; ++j) {
        const double coefficient = 0.05 + 0.95 * i / (kCells - 1.0);
        const double length_km = 1.0 + 19.0 * j / (kCells - 1.0);
        out.push_back(kernel(coefficient, length_km, kSteps));
      }
    }
  };
  const double serial_ms = run_timed([&] { sweep(serial, par::grid_max_expected_ds_serial); });
  const double parallel_ms = run_timed([&] { sweep(parallel, par::grid_max_expected_ds); });
  bool match = serial.size() == parallel.size();
  for (std::size_t i = 0; match && i < serial.size(); ++i)
    match = serial[i].x == parallel[i].x && serial[i].ds == parallel[i].ds;
  report("grid argmax 20x20", serial_ms, parallel_ms, match);
}

void bench_filter() {
  const auto log = synthetic_log(50000, 4);
  std::pair<std::vector<data::FrameRecord>, data::FilterStats> serial;
  std::pair<std::vector<data::FrameRecord>, data::FilterStats> parallel;
  const double serial_ms = run_timed([&] { serial = data::filter_frames(log, {}, 5); });
  const double parallel_ms =
      run_timed([&] { parallel = par::filter_frames_parallel(log, {}, 5); });
  bool match = serial.second.kept == parallel.second.kept &&
               serial.second.change == parallel.second.change &&
               serial.first.size() == parallel.first.size();
  for (std::size_t i = 0; match && i < serial.first.size(); ++i)
    match = serial.first[i].frame_index == parallel.first[i].frame_index &&
            serial.first[i].route_id == parallel.first[i].route_id;
  report("filter 200k frames", serial_ms, parallel_ms, match);
}

void bench_obb_batch() {
  rng::Stream stream(rng::combine(3, 9));
  std::vector<par::BoxPair> pairs;
  pairs.reserve(2000000);
  for (int i = 0; i < 2000000; ++i) {
    geom::OrientedBox a{{stream.uniform(-5.0, 5.0), stream.uniform(-5.0, 5.0),
                         stream.uniform(-geom::kPi, geom::kPi)},
                        stream.uniform(0.2, 3.0),
                        stream.uniform(0.2, 1.5)};
    geom::OrientedBox b{{stream.uniform(-5.0, 5.0), stream.uniform(-5.0, 5.0),
                         stream.uniform(-geom::kPi, geom::kPi)},
                        stream.uniform(0.2, 3.0),
                        stream.uniform(0.2, 1.5)};
    pairs.emplace_back(a, b);
  }
  std::vector<std::uint8_t> serial;
  std::vector<std::uint8_t> parallel;
  const double serial_ms = run_timed([&] { serial = par::obb_intersect_batch_serial(pairs); });
  const double parallel_ms = run_timed([&] { parallel = par::obb_intersect_batch(pairs); });
  report("obb batch 2M pairs", serial_ms, parallel_ms, serial == parallel);
}

void bench_run_suite() {
  std::vector<sim::SuiteRoute> routes;
  for (int i = 0; i < 6; ++i) {
    sim::SuiteRoute route;
    route.id = "bench-" + std::to_string(i);
    route.sparse.target_points = {{0.0, 0.0}, {400.0, 0.0}};
    if (i % 2 == 1) {
      sim::ScenarioSpec spec;
      spec.kind = sim::ScenarioKind::lead_vehicle_slowdown;
      spec.trigger_arc = 120.0;
      route.scenarios.push_back(spec);
    }
    routes.push_back(route);
  }
  par::SuiteRunConfig config;
  config.seed = 77;
  std::vector<par::RouteOutcome> serial;
  std::vector<par::RouteOutcome> parallel;
  const double serial_ms = run_timed([&] { serial = par::run_suite_serial(routes, config); });
  const double parallel_ms = run_timed([&] { parallel = par::run_suite(routes, config); });
  bool match = serial.size() == parallel.size();
  for (std::size_t i = 0; match && i < serial.size(); ++i)
    match = serial[i].route_id == parallel[i].route_id &&
            serial[i].result.ledger.counts == parallel[i].result.ledger.counts &&
            serial[i].result.ledger.distance_km == parallel[i].result.ledger.distance_km &&
            serial[i].result.frames.size() == parallel[i].result.frames.size();
  report("run suite 6 routes", serial_ms, parallel_ms, match);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-22s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");
  bench_grid_argmax();
  bench_filter();
  bench_obb_batch();
  bench_run_suite();
  return 0;
}
