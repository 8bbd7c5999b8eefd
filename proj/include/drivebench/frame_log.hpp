#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "drivebench/control.hpp"
#include "drivebench/geometry.hpp"

namespace drivebench::data {

/// One logged simulator tick: the ego observation, the expert's planned
/// target speed, and the ground-truth path checkpoints in the ego frame.
struct FrameRecord {
  std::string route_id;
  std::uint64_t frame_index{0};
  double sim_time{0.0};
  geom::Pose2D ego_pose;
  double ego_speed{0.0};
  double target_speed{0.0};
  ctrl::Checkpoints checkpoints;
  std::vector<std::string> events;  // infraction tags raised this frame
};

/// Line-oriented text format: a `#framelog v1` header, a `#fields` line
/// naming the columns, then one space-separated record per line with
/// full-precision doubles. Events are comma-joined, `-` when empty.
void write_frame_log(std::ostream& out, const std::vector<FrameRecord>& frames);
std::vector<FrameRecord> read_frame_log(std::istream& in, const std::string& name = "<stream>");

void write_frame_log_file(const std::string& path, const std::vector<FrameRecord>& frames);
std::vector<FrameRecord> read_frame_log_file(const std::string& path);

}  // namespace drivebench::data
