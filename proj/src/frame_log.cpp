#include "drivebench/frame_log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace drivebench::data {

namespace {

constexpr const char* kHeader = "#framelog v1";

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_frame_log(std::ostream& out, const std::vector<FrameRecord>& frames) {
  out << kHeader << "\n";
  out << "#fields route_id frame time x y yaw speed target";
  for (std::size_t k = 0; k < ctrl::Checkpoints::kCount; ++k) {
    out << " cp" << k << "x cp" << k << "y";
  }
  out << " events\n";
  for (const auto& f : frames) {
    out << f.route_id << ' ' << f.frame_index << ' ' << format_double(f.sim_time) << ' '
        << format_double(f.ego_pose.x) << ' ' << format_double(f.ego_pose.y) << ' '
        << format_double(f.ego_pose.yaw) << ' ' << format_double(f.ego_speed) << ' '
        << format_double(f.target_speed);
    for (const auto& cp : f.checkpoints.points) {
      out << ' ' << format_double(cp.x) << ' ' << format_double(cp.y);
    }
    if (f.events.empty()) {
      out << " -";
    } else {
      out << ' ';
      for (std::size_t i = 0; i < f.events.size(); ++i) {
        if (i > 0) out << ',';
        out << f.events[i];
      }
    }
    out << "\n";
  }
}

std::vector<FrameRecord> read_frame_log(std::istream& in, const std::string& name) {
  std::vector<FrameRecord> frames;
  std::string line;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& what) {
    throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " + what);
  };

  if (!std::getline(in, line)) return frames;
  ++line_no;
  if (line != kHeader) fail("expected '" + std::string(kHeader) + "' header");

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    FrameRecord f;
    double yaw = 0.0;
    if (!(ss >> f.route_id >> f.frame_index >> f.sim_time >> f.ego_pose.x >> f.ego_pose.y >>
          yaw >> f.ego_speed >> f.target_speed)) {
      fail("malformed record");
    }
    f.ego_pose = geom::Pose2D(f.ego_pose.x, f.ego_pose.y, yaw);
    for (auto& cp : f.checkpoints.points) {
      if (!(ss >> cp.x >> cp.y)) fail("malformed checkpoint columns");
    }
    std::string events;
    if (!(ss >> events)) fail("missing events column");
    if (events != "-") {
      std::stringstream es(events);
      std::string tag;
      while (std::getline(es, tag, ',')) {
        if (!tag.empty()) f.events.push_back(tag);
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

void write_frame_log_file(const std::string& path, const std::vector<FrameRecord>& frames) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_frame_log(out, frames);
}

std::vector<FrameRecord> read_frame_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_frame_log(in, path);
}

}  // namespace drivebench::data
