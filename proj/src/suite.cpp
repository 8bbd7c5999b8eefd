#include "drivebench/suite.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace drivebench::sim {
namespace {

[[noreturn]] void fail(const std::string& name, int line, const std::string& message) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + message);
}

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& value, const std::string& name, int line,
                    const std::string& key) {
  std::istringstream parser(value);
  double number = 0.0;
  if (!(parser >> number)) fail(name, line, "bad number for " + key);
  std::string rest;
  if (parser >> rest) fail(name, line, "trailing text after " + key);
  return number;
}

}  // namespace

std::vector<SuiteRoute> parse_suite(std::istream& in, const std::string& name) {
  enum class Section { none, route, scenario, hazard };
  std::vector<SuiteRoute> routes;
  Section section = Section::none;
  std::string line;
  int line_no = 0;

  const auto current_route = [&](int at_line) -> SuiteRoute& {
    if (routes.empty()) fail(name, at_line, "section before any [route]");
    return routes.back();
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trimmed(line);
    if (text.empty() || text.front() == '#') continue;

    if (text.front() == '[') {
      if (text == "[route]") {
        routes.emplace_back();
        section = Section::route;
      } else if (text == "[scenario]") {
        current_route(line_no).scenarios.emplace_back();
        section = Section::scenario;
      } else if (text == "[hazard]") {
        current_route(line_no).hazards.emplace_back();
        section = Section::hazard;
      } else {
        fail(name, line_no, "unknown section " + text);
      }
      continue;
    }

    const auto colon = text.find(':');
    if (colon == std::string::npos) fail(name, line_no, "expected key: value");
    const std::string key = trimmed(text.substr(0, colon));
    const std::string value = trimmed(text.substr(colon + 1));
    if (value.empty()) fail(name, line_no, "missing value for " + key);

    switch (section) {
      case Section::none:
        fail(name, line_no, "key outside any section");

      case Section::route: {
        SuiteRoute& route = current_route(line_no);
        if (key == "id") {
          route.id = value;
        } else if (key == "tp") {
          std::istringstream parser(value);
          geom::Vec2 p;
          if (!(parser >> p.x >> p.y)) fail(name, line_no, "tp needs two numbers");
          route.sparse.target_points.push_back(p);
        } else if (key == "stop_sign") {
          route.stop_sign_arcs.push_back(parse_number(value, name, line_no, key));
        } else if (key == "speed_limit") {
          route.speed_limit = parse_number(value, name, line_no, key);
        } else {
          fail(name, line_no, "unknown route key " + key);
        }
        break;
      }

      case Section::scenario: {
        ScenarioSpec& spec = current_route(line_no).scenarios.back();
        if (key == "kind") {
          try {
            spec.kind = scenario_kind_from_name(value);
          } catch (const std::invalid_argument& e) {
            fail(name, line_no, e.what());
          }
        } else if (key == "trigger_arc") {
          spec.trigger_arc = parse_number(value, name, line_no, key);
        } else {
          spec.params[key] = parse_number(value, name, line_no, key);
        }
        break;
      }

      case Section::hazard: {
        HazardSpec& hazard = current_route(line_no).hazards.back();
        if (key == "type") {
          try {
            infraction_from_tag(value);
          } catch (const std::invalid_argument& e) {
            fail(name, line_no, e.what());
          }
          hazard.type = value;
        } else if (key == "rate_per_km") {
          hazard.rate_per_km = parse_number(value, name, line_no, key);
        } else if (key == "spacing") {
          if (value == "fixed") {
            hazard.deterministic = true;
          } else if (value == "exponential") {
            hazard.deterministic = false;
          } else {
            fail(name, line_no, "spacing must be fixed or exponential");
          }
        } else {
          fail(name, line_no, "unknown hazard key " + key);
        }
        break;
      }
    }
  }

  for (std::size_t i = 0; i < routes.size(); ++i) {
    if (routes[i].id.empty()) fail(name, line_no, "route " + std::to_string(i) + " has no id");
    if (routes[i].sparse.target_points.size() < 2) {
      fail(name, line_no, "route " + routes[i].id + " needs at least 2 target points");
    }
  }
  return routes;
}

std::vector<SuiteRoute> load_suite_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return parse_suite(in, path);
}

World build_world(const SuiteRoute& route, std::uint64_t seed, const WorldParams& params) {
  WorldParams effective = params;
  if (route.speed_limit > 0.0) effective.speed_limit = route.speed_limit;
  World world(route::densify(route.sparse), route.scenarios, seed, effective);
  for (const double arc : route.stop_sign_arcs) world.add_stop_sign(arc);
  for (const HazardSpec& hazard : route.hazards) world.add_hazard(hazard);
  return world;
}

}  // namespace drivebench::sim
