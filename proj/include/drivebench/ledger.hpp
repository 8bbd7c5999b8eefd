#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>

namespace drivebench::sim {

enum class Infraction : std::size_t {
  collision_pedestrian = 0,
  collision_vehicle = 1,
  collision_layout = 2,
  red_light = 3,
  stop_sign = 4,
  scenario_timeout = 5,
  yield_emergency = 6,
};

inline constexpr std::size_t kInfractionCount = 7;

/// Short tags used in ledgers, logs, and CSV columns.
const char* infraction_tag(Infraction type);
Infraction infraction_from_tag(const std::string& tag);

struct InfractionLedger {
  std::array<int, kInfractionCount> counts{};
  double distance_km{0.0};
  double route_fraction{0.0};
  bool aborted{false};

  int count(Infraction type) const { return counts[static_cast<std::size_t>(type)]; }
  int& count(Infraction type) { return counts[static_cast<std::size_t>(type)]; }
  int total() const;
};

/// Key-value text format with a `#ledger v1` header.
void write_ledger(std::ostream& out, const std::string& route_id, const InfractionLedger& ledger);
/// Returns the route id; throws with file:line context on malformed input.
std::string read_ledger(std::istream& in, InfractionLedger& ledger,
                        const std::string& name = "<stream>");

void write_ledger_file(const std::string& path, const std::string& route_id,
                       const InfractionLedger& ledger);
std::string read_ledger_file(const std::string& path, InfractionLedger& ledger);

}  // namespace drivebench::sim
