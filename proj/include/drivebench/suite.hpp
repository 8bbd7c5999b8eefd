#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "drivebench/route.hpp"
#include "drivebench/scenario.hpp"
#include "drivebench/world.hpp"

namespace drivebench::sim {

/// One benchmark route: sparse target points plus the hazards along it.
struct SuiteRoute {
  std::string id;
  route::SparseRoute sparse;
  std::vector<ScenarioSpec> scenarios;
  std::vector<HazardSpec> hazards;
  std::vector<double> stop_sign_arcs;
  double speed_limit{-1.0};  // m/s; <= 0 keeps the world default
};

/// Section-based text format. `[route]` opens a route (`id:`, repeated
/// `tp: x y`, optional `stop_sign: arc`); `[scenario]` and `[hazard]`
/// blocks attach to the route above them. Unknown scenario keys become
/// numeric scenario parameters. Throws with file:line context.
std::vector<SuiteRoute> parse_suite(std::istream& in, const std::string& name = "<stream>");
std::vector<SuiteRoute> load_suite_file(const std::string& path);

/// Densifies the route and instantiates its scenarios, signs, and hazards.
World build_world(const SuiteRoute& route, std::uint64_t seed, const WorldParams& params = {});

}  // namespace drivebench::sim
