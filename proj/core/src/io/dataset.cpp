#include "omni/io/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace omni {

void write_pgm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            std::streamsize(img.data.size()));
  if (!out) throw IoError("write failed: " + path);
}

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P5" || w <= 0 || h <= 0 || maxval != 255)
    throw ParseError(path + ": not an 8-bit binary PGM");
  in.get();  // single whitespace after the header
  Image img(w, h);
  in.read(reinterpret_cast<char*>(img.data.data()), std::streamsize(img.data.size()));
  if (!in) throw ParseError(path + ": truncated pixel data");
  return img;
}

void write_imu_csv(const std::string& path, const std::vector<ImuSample>& samples) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# t gx gy gz ax ay az\n";
  char line[256];
  for (const ImuSample& s : samples) {
    std::snprintf(line, sizeof(line), "%.9f %.12g %.12g %.12g %.12g %.12g %.12g\n",
                  s.timestamp, s.gyro.x(), s.gyro.y(), s.gyro.z(), s.accel.x(),
                  s.accel.y(), s.accel.z());
    out << line;
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<ImuSample> read_imu_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<ImuSample> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream iss(line);
    ImuSample s;
    if (!(iss >> s.timestamp >> s.gyro.x() >> s.gyro.y() >> s.gyro.z() >>
          s.accel.x() >> s.accel.y() >> s.accel.z()))
      throw ParseError(path + ":" + std::to_string(line_no) + ": malformed IMU row");
    samples.push_back(s);
  }
  return samples;
}

namespace {

const char* kind_name(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::Circle: return "circle";
    case TrajectoryKind::Infinity: return "infinity";
    case TrajectoryKind::RandomWaypoint: return "random";
  }
  return "circle";
}

TrajectoryKind kind_from_name(const std::string& name) {
  if (name == "circle") return TrajectoryKind::Circle;
  if (name == "infinity") return TrajectoryKind::Infinity;
  if (name == "random") return TrajectoryKind::RandomWaypoint;
  throw ParseError("unknown trajectory kind: " + name);
}

}  // namespace

void write_manifest(const std::string& path, const DatasetInfo& info) {
  nlohmann::json j;
  j["seed"] = info.seed;
  j["fps"] = info.fps;
  j["num_frames"] = info.num_frames;
  j["imu_rate_hz"] = info.imu_rate_hz;
  j["zero_noise"] = info.zero_noise;
  j["scene"] = info.scene;
  j["room_half_size"] = info.room_half_size;
  j["room_height"] = info.room_height;
  auto& t = j["trajectory"];
  t["kind"] = kind_name(info.trajectory.kind);
  t["radius"] = info.trajectory.radius;
  t["speed"] = info.trajectory.speed;
  t["height"] = info.trajectory.height;
  t["yaw_mode"] =
      info.trajectory.yaw_mode == YawMode::FollowVelocity ? "follow" : "fixed";
  t["fixed_yaw"] = info.trajectory.fixed_yaw;
  t["duration"] = info.trajectory.duration;
  t["static_time"] = info.trajectory.static_time;
  t["ramp_time"] = info.trajectory.ramp_time;
  t["seed"] = info.trajectory.seed;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

DatasetInfo read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    DatasetInfo info;
    info.seed = j.at("seed").get<uint32_t>();
    info.fps = j.at("fps").get<double>();
    info.num_frames = j.at("num_frames").get<int>();
    info.imu_rate_hz = j.at("imu_rate_hz").get<double>();
    info.zero_noise = j.value("zero_noise", false);
    info.scene = j.value("scene", std::string("room"));
    info.room_half_size = j.value("room_half_size", 3.0);
    info.room_height = j.value("room_height", 2.0);
    const auto& t = j.at("trajectory");
    info.trajectory.kind = kind_from_name(t.at("kind").get<std::string>());
    info.trajectory.radius = t.at("radius").get<double>();
    info.trajectory.speed = t.at("speed").get<double>();
    info.trajectory.height = t.at("height").get<double>();
    info.trajectory.yaw_mode = t.at("yaw_mode").get<std::string>() == "fixed"
                                   ? YawMode::Fixed
                                   : YawMode::FollowVelocity;
    info.trajectory.fixed_yaw = t.at("fixed_yaw").get<double>();
    info.trajectory.duration = t.at("duration").get<double>();
    info.trajectory.static_time = t.at("static_time").get<double>();
    info.trajectory.ramp_time = t.at("ramp_time").get<double>();
    info.trajectory.seed = t.at("seed").get<uint32_t>();
    return info;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string frame_path(const std::string& dir, int frame, int camera) {
  char name[64];
  std::snprintf(name, sizeof(name), "/frames/%06d_c%d.pgm", frame, camera);
  return dir + name;
}

std::array<Image, 4> read_frame(const std::string& dir, int frame) {
  std::array<Image, 4> out;
  for (int c = 0; c < 4; ++c) out[c] = read_pgm(frame_path(dir, frame, c));
  return out;
}

}  // namespace omni
