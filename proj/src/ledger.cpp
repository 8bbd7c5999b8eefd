#include "drivebench/ledger.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace drivebench::sim {
namespace {

constexpr std::array<const char*, kInfractionCount> kTags = {
    "CP", "CV", "CL", "RL", "SI", "ST", "YE",
};

[[noreturn]] void fail(const std::string& name, int line, const std::string& message) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + message);
}

}  // namespace

const char* infraction_tag(Infraction type) { return kTags[static_cast<std::size_t>(type)]; }

Infraction infraction_from_tag(const std::string& tag) {
  for (std::size_t i = 0; i < kTags.size(); ++i) {
    if (tag == kTags[i]) return static_cast<Infraction>(i);
  }
  throw std::invalid_argument("unknown infraction tag: " + tag);
}

int InfractionLedger::total() const {
  int sum = 0;
  for (const int c : counts) sum += c;
  return sum;
}

void write_ledger(std::ostream& out, const std::string& route_id, const InfractionLedger& ledger) {
  out << "#ledger v1\n";
  out << "route: " << route_id << "\n";
  for (std::size_t i = 0; i < kInfractionCount; ++i) {
    out << kTags[i] << ": " << ledger.counts[i] << "\n";
  }
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", ledger.distance_km);
  out << "distance_km: " << buffer << "\n";
  std::snprintf(buffer, sizeof(buffer), "%.17g", ledger.route_fraction);
  out << "route_fraction: " << buffer << "\n";
  out << "aborted: " << (ledger.aborted ? 1 : 0) << "\n";
}

std::string read_ledger(std::istream& in, InfractionLedger& ledger, const std::string& name) {
  InfractionLedger parsed;
  std::string route_id;
  bool saw_header = false;
  bool saw_route = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind("#ledger", 0) == 0) saw_header = true;
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) fail(name, line_no, "expected key: value");
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    const auto start = value.find_first_not_of(" \t");
    value = start == std::string::npos ? std::string{} : value.substr(start);
    if (value.empty()) fail(name, line_no, "missing value for " + key);
    if (key == "route") {
      route_id = value;
      saw_route = true;
      continue;
    }
    std::istringstream parser(value);
    if (key == "distance_km" || key == "route_fraction") {
      double number = 0.0;
      if (!(parser >> number)) fail(name, line_no, "bad number for " + key);
      (key == "distance_km" ? parsed.distance_km : parsed.route_fraction) = number;
      continue;
    }
    int number = 0;
    if (!(parser >> number)) fail(name, line_no, "bad count for " + key);
    if (key == "aborted") {
      parsed.aborted = number != 0;
      continue;
    }
    bool matched = false;
    for (std::size_t i = 0; i < kTags.size(); ++i) {
      if (key == kTags[i]) {
        parsed.counts[i] = number;
        matched = true;
        break;
      }
    }
    if (!matched) fail(name, line_no, "unknown key: " + key);
  }
  if (!saw_header) fail(name, 1, "missing #ledger header");
  if (!saw_route) fail(name, 1, "missing route id");
  ledger = parsed;
  return route_id;
}

void write_ledger_file(const std::string& path, const std::string& route_id,
                       const InfractionLedger& ledger) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_ledger(out, route_id, ledger);
}

std::string read_ledger_file(const std::string& path, InfractionLedger& ledger) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_ledger(in, ledger, path);
}

}  // namespace drivebench::sim
