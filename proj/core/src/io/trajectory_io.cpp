#include "omni/io/trajectory_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace omni {

void write_tum(const std::string& path, const TrajectoryData& traj) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  char line[256];
  for (const TrajectoryPoint& pt : traj) {
    std::snprintf(line, sizeof(line),
                  "%.9g %.9g %.9g %.9g %.9g %.9g %.9g %.9g\n", pt.t, pt.p.x(),
                  pt.p.y(), pt.p.z(), pt.q.x(), pt.q.y(), pt.q.z(), pt.q.w());
    out << line;
  }
  if (!out) throw IoError("write failed: " + path);
}

TrajectoryData read_tum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  TrajectoryData traj;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream iss(line);
    TrajectoryPoint pt;
    double qx, qy, qz, qw;
    if (!(iss >> pt.t >> pt.p.x() >> pt.p.y() >> pt.p.z() >> qx >> qy >> qz >> qw))
      throw ParseError(path + ":" + std::to_string(line_no) + ": malformed TUM row");
    pt.q = Quat(qw, qx, qy, qz);
    if (!traj.empty() && pt.t <= traj.back().t)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": timestamps not strictly increasing");
    traj.push_back(pt);
  }
  return traj;
}

}  // namespace omni
