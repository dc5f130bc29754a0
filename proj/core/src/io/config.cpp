#include "omni/io/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace omni {

namespace {

[[noreturn]] void missing(const std::string& key) {
  throw ValidationError("missing required key: " + key);
}

double get_double(const YAML::Node& node, const std::string& key) {
  if (!node[key]) missing(key);
  try {
    return node[key].as<double>();
  } catch (const YAML::Exception&) {
    throw ValidationError("key is not a number: " + key);
  }
}

int get_int(const YAML::Node& node, const std::string& key) {
  if (!node[key]) missing(key);
  try {
    return node[key].as<int>();
  } catch (const YAML::Exception&) {
    throw ValidationError("key is not an integer: " + key);
  }
}

double opt_double(const YAML::Node& node, const std::string& key, double fallback) {
  return node && node[key] ? get_double(node, key) : fallback;
}

int opt_int(const YAML::Node& node, const std::string& key, int fallback) {
  return node && node[key] ? get_int(node, key) : fallback;
}

std::vector<double> get_seq(const YAML::Node& node, const std::string& key,
                            size_t count) {
  if (!node[key]) missing(key);
  const YAML::Node seq = node[key];
  if (!seq.IsSequence() || seq.size() != count)
    throw ValidationError("key " + key + " must be a sequence of " +
                          std::to_string(count) + " numbers");
  std::vector<double> out;
  for (const auto& v : seq) {
    try {
      out.push_back(v.as<double>());
    } catch (const YAML::Exception&) {
      throw ValidationError("key " + key + " contains a non-number");
    }
  }
  return out;
}

SE3Pose parse_pose(const YAML::Node& node, const std::string& key) {
  if (!node[key]) missing(key);
  const YAML::Node p = node[key];
  const auto t = get_seq(p, "t", 3);
  const auto q = get_seq(p, "q", 4);  // [w, x, y, z]
  SE3Pose pose;
  pose.translation = Vec3(t[0], t[1], t[2]);
  pose.rotation = Quat(q[0], q[1], q[2], q[3]);
  const double n = pose.rotation.norm();
  if (std::abs(n - 1.0) > 1e-6)
    throw ValidationError("key " + key + ".q is not a unit quaternion (norm " +
                          std::to_string(n) + ")");
  // Keep already-normalized values bit-exact so configs round-trip.
  if (std::abs(n - 1.0) > 1e-12) pose.rotation.normalize();
  return pose;
}

void emit_pose(YAML::Emitter& out, const SE3Pose& pose) {
  out << YAML::BeginMap;
  out << YAML::Key << "t" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << pose.translation.x() << pose.translation.y() << pose.translation.z()
      << YAML::EndSeq;
  out << YAML::Key << "q" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << pose.rotation.w() << pose.rotation.x() << pose.rotation.y()
      << pose.rotation.z() << YAML::EndSeq;
  out << YAML::EndMap;
}

}  // namespace

RigConfig load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw IoError("cannot open config: " + path);
  } catch (const YAML::Exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  RigConfig cfg;

  if (!root["cameras"]) missing("cameras");
  const YAML::Node cams = root["cameras"];
  if (!cams.IsSequence() || cams.size() != 4)
    throw ValidationError("cameras must list exactly 4 entries, got " +
                          std::to_string(cams.size()));
  for (size_t i = 0; i < 4; ++i) {
    const YAML::Node c = cams[i];
    const std::string prefix = "cameras[" + std::to_string(i) + "].";
    if (!c["id"]) missing(prefix + "id");
    cfg.camera_ids[i] = c["id"].as<std::string>();
    if (!c["model"]) missing(prefix + "model");
    if (c["model"].as<std::string>() != "mei")
      throw ValidationError(prefix + "model must be 'mei'");

    MeiCamera& m = cfg.rig.cameras[i].camera;
    m.xi = get_double(c, "xi");
    m.fx = get_double(c, "fx");
    m.fy = get_double(c, "fy");
    m.u0 = get_double(c, "u0");
    m.v0 = get_double(c, "v0");
    if (m.fx <= 0.0 || m.fy <= 0.0)
      throw ValidationError(prefix + "fx/fy must be positive");
    if (m.xi < 0.0) throw ValidationError(prefix + "xi must be non-negative");
    const auto dist = get_seq(c, "dist", 4);
    m.distortion = RadTanDistortion{dist[0], dist[1], dist[2], dist[3]};
    const auto res = get_seq(c, "resolution", 2);
    m.width = int(res[0]);
    m.height = int(res[1]);
    if (m.width <= 0 || m.height <= 0)
      throw ValidationError(prefix + "resolution must be positive");
    m.fov_deg = opt_double(c, "fov_deg", 190.0);
    if (m.fov_deg <= 0.0 || m.fov_deg >= 360.0)
      throw ValidationError(prefix + "fov_deg out of range (0, 360)");
    try {
      cfg.rig.cameras[i].body_from_camera = parse_pose(c, "T_body_cam");
    } catch (const ValidationError& e) {
      throw ValidationError(prefix + e.what());
    }
  }

  const YAML::Node imu = root["imu"];
  if (imu) {
    cfg.imu_rate_hz = opt_double(imu, "rate_hz", 500.0);
    if (cfg.imu_rate_hz <= 0.0) throw ValidationError("imu.rate_hz must be positive");
    const YAML::Node noise = imu["noise"];
    cfg.imu_noise.accel_noise_density =
        opt_double(noise, "accel_noise_density", cfg.imu_noise.accel_noise_density);
    cfg.imu_noise.gyro_noise_density =
        opt_double(noise, "gyro_noise_density", cfg.imu_noise.gyro_noise_density);
    cfg.imu_noise.accel_bias_walk =
        opt_double(noise, "accel_bias_walk", cfg.imu_noise.accel_bias_walk);
    cfg.imu_noise.gyro_bias_walk =
        opt_double(noise, "gyro_bias_walk", cfg.imu_noise.gyro_bias_walk);
    cfg.imu_noise.gravity = opt_double(noise, "gravity", cfg.imu_noise.gravity);
    if (imu["T_body_imu"]) {
      try {
        cfg.rig.imu_from_body = parse_pose(imu, "T_body_imu").inverse();
      } catch (const ValidationError& e) {
        throw ValidationError(std::string("imu.") + e.what());
      }
    }
  }

  const YAML::Node virt = root["virtual"];
  if (virt) {
    cfg.virtual_cam.fov_deg = opt_double(virt, "fov_deg", 100.0);
    if (cfg.virtual_cam.fov_deg <= 0.0 || cfg.virtual_cam.fov_deg >= 180.0)
      throw ValidationError("virtual.fov_deg out of range (0, 180)");
    const auto res = get_seq(virt, "resolution", 2);
    cfg.virtual_cam.width = int(res[0]);
    cfg.virtual_cam.height = int(res[1]);
    if (cfg.virtual_cam.width <= 0 || cfg.virtual_cam.height <= 0)
      throw ValidationError("virtual.resolution must be positive");
  }

  const YAML::Node vio = root["vio"];
  if (vio) {
    cfg.vio.window = opt_int(vio, "window", cfg.vio.window);
    cfg.vio.max_features = opt_int(vio, "max_features", cfg.vio.max_features);
    cfg.vio.parallax_px = opt_double(vio, "parallax_px", cfg.vio.parallax_px);
    cfg.vio.min_tracked = opt_int(vio, "min_tracked", cfg.vio.min_tracked);
    cfg.vio.keyframe_dt = opt_double(vio, "keyframe_dt", cfg.vio.keyframe_dt);
    cfg.vio.pixel_sigma = opt_double(vio, "pixel_sigma", cfg.vio.pixel_sigma);
    cfg.vio.huber_delta = opt_double(vio, "huber_delta", cfg.vio.huber_delta);
    cfg.vio.static_init_time =
        opt_double(vio, "static_init_time", cfg.vio.static_init_time);
    if (cfg.vio.window < 2 || cfg.vio.window > 10)
      throw ValidationError("vio.window out of range [2, 10]");
    if (cfg.vio.max_features < 8)
      throw ValidationError("vio.max_features must be >= 8");
    const YAML::Node tracking = vio["tracking"];
    if (tracking) {
      cfg.vio.tracking_fov_deg =
          opt_double(tracking, "fov_deg", cfg.vio.tracking_fov_deg);
      const auto res = get_seq(tracking, "resolution", 2);
      cfg.vio.tracking_width = int(res[0]);
      cfg.vio.tracking_height = int(res[1]);
      if (cfg.vio.tracking_width <= 0 || cfg.vio.tracking_height <= 0)
        throw ValidationError("vio.tracking.resolution must be positive");
    }
  }

  const YAML::Node depth = root["depth"];
  if (depth) {
    if (depth["disparity_range"]) {
      const auto range = get_seq(depth, "disparity_range", 2);
      cfg.depth.min_disparity = int(range[0]);
      cfg.depth.max_disparity = int(range[1]);
      if (cfg.depth.min_disparity < 0 ||
          cfg.depth.max_disparity <= cfg.depth.min_disparity)
        throw ValidationError("depth.disparity_range must satisfy 0 <= min < max");
    }
    cfg.depth.voxel_leaf = opt_double(depth, "voxel_leaf", cfg.depth.voxel_leaf);
    cfg.depth.z_min = opt_double(depth, "z_min", cfg.depth.z_min);
    cfg.depth.z_max = opt_double(depth, "z_max", cfg.depth.z_max);
    if (cfg.depth.voxel_leaf <= 0.0)
      throw ValidationError("depth.voxel_leaf must be positive");
    if (cfg.depth.z_min <= 0.0 || cfg.depth.z_max <= cfg.depth.z_min)
      throw ValidationError("depth z range must satisfy 0 < z_min < z_max");
  }

  return cfg;
}

void save_config(const std::string& path, const RigConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "cameras" << YAML::Value << YAML::BeginSeq;
  for (int i = 0; i < 4; ++i) {
    const MeiCamera& m = cfg.rig.cameras[i].camera;
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << cfg.camera_ids[i];
    out << YAML::Key << "model" << YAML::Value << "mei";
    out << YAML::Key << "xi" << YAML::Value << m.xi;
    out << YAML::Key << "fx" << YAML::Value << m.fx;
    out << YAML::Key << "fy" << YAML::Value << m.fy;
    out << YAML::Key << "u0" << YAML::Value << m.u0;
    out << YAML::Key << "v0" << YAML::Value << m.v0;
    out << YAML::Key << "dist" << YAML::Value << YAML::Flow << YAML::BeginSeq
        << m.distortion.k1 << m.distortion.k2 << m.distortion.p1 << m.distortion.p2
        << YAML::EndSeq;
    out << YAML::Key << "resolution" << YAML::Value << YAML::Flow << YAML::BeginSeq
        << m.width << m.height << YAML::EndSeq;
    out << YAML::Key << "fov_deg" << YAML::Value << m.fov_deg;
    out << YAML::Key << "T_body_cam" << YAML::Value;
    emit_pose(out, cfg.rig.cameras[i].body_from_camera);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "imu" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rate_hz" << YAML::Value << cfg.imu_rate_hz;
  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "accel_noise_density" << YAML::Value
      << cfg.imu_noise.accel_noise_density;
  out << YAML::Key << "gyro_noise_density" << YAML::Value
      << cfg.imu_noise.gyro_noise_density;
  out << YAML::Key << "accel_bias_walk" << YAML::Value << cfg.imu_noise.accel_bias_walk;
  out << YAML::Key << "gyro_bias_walk" << YAML::Value << cfg.imu_noise.gyro_bias_walk;
  out << YAML::Key << "gravity" << YAML::Value << cfg.imu_noise.gravity;
  out << YAML::EndMap;
  out << YAML::Key << "T_body_imu" << YAML::Value;
  emit_pose(out, cfg.rig.imu_from_body.inverse());
  out << YAML::EndMap;

  out << YAML::Key << "virtual" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "fov_deg" << YAML::Value << cfg.virtual_cam.fov_deg;
  out << YAML::Key << "resolution" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << cfg.virtual_cam.width << cfg.virtual_cam.height << YAML::EndSeq;
  out << YAML::EndMap;

  out << YAML::Key << "vio" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "window" << YAML::Value << cfg.vio.window;
  out << YAML::Key << "max_features" << YAML::Value << cfg.vio.max_features;
  out << YAML::Key << "parallax_px" << YAML::Value << cfg.vio.parallax_px;
  out << YAML::Key << "min_tracked" << YAML::Value << cfg.vio.min_tracked;
  out << YAML::Key << "keyframe_dt" << YAML::Value << cfg.vio.keyframe_dt;
  out << YAML::Key << "pixel_sigma" << YAML::Value << cfg.vio.pixel_sigma;
  out << YAML::Key << "huber_delta" << YAML::Value << cfg.vio.huber_delta;
  out << YAML::Key << "static_init_time" << YAML::Value << cfg.vio.static_init_time;
  out << YAML::Key << "tracking" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "fov_deg" << YAML::Value << cfg.vio.tracking_fov_deg;
  out << YAML::Key << "resolution" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << cfg.vio.tracking_width << cfg.vio.tracking_height << YAML::EndSeq;
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "depth" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "disparity_range" << YAML::Value << YAML::Flow << YAML::BeginSeq
      << cfg.depth.min_disparity << cfg.depth.max_disparity << YAML::EndSeq;
  out << YAML::Key << "voxel_leaf" << YAML::Value << cfg.depth.voxel_leaf;
  out << YAML::Key << "z_min" << YAML::Value << cfg.depth.z_min;
  out << YAML::Key << "z_max" << YAML::Value << cfg.depth.z_max;
  out << YAML::EndMap;

  out << YAML::EndMap;

  std::ofstream file(path);
  if (!file) throw IoError("cannot open for writing: " + path);
  file << out.c_str() << "\n";
  if (!file) throw IoError("write failed: " + path);
}

RigConfig reference_config() {
  MeiCamera cam;
  cam.xi = 1.2;
  cam.fx = 150.0;
  cam.fy = 150.0;
  cam.u0 = 159.5;
  cam.v0 = 159.5;
  cam.width = 320;
  cam.height = 320;
  cam.fov_deg = 190.0;
  cam.distortion = RadTanDistortion{-0.02, 0.005, 0.0001, -0.0001};

  RigConfig cfg;
  cfg.rig = FisheyeRig::ideal_square(cam, 0.18);
  return cfg;
}

bool operator==(const RigConfig& a, const RigConfig& b) {
  auto pose_eq = [](const SE3Pose& x, const SE3Pose& y) {
    return x.translation == y.translation &&
           x.rotation.coeffs() == y.rotation.coeffs();
  };
  for (int i = 0; i < 4; ++i) {
    const MeiCamera& ma = a.rig.cameras[i].camera;
    const MeiCamera& mb = b.rig.cameras[i].camera;
    if (a.camera_ids[i] != b.camera_ids[i]) return false;
    if (ma.xi != mb.xi || ma.fx != mb.fx || ma.fy != mb.fy || ma.u0 != mb.u0 ||
        ma.v0 != mb.v0 || ma.width != mb.width || ma.height != mb.height ||
        ma.fov_deg != mb.fov_deg)
      return false;
    if (ma.distortion.k1 != mb.distortion.k1 || ma.distortion.k2 != mb.distortion.k2 ||
        ma.distortion.p1 != mb.distortion.p1 || ma.distortion.p2 != mb.distortion.p2)
      return false;
    if (!pose_eq(a.rig.cameras[i].body_from_camera, b.rig.cameras[i].body_from_camera))
      return false;
  }
  return pose_eq(a.rig.imu_from_body, b.rig.imu_from_body) &&
         a.imu_rate_hz == b.imu_rate_hz &&
         a.imu_noise.accel_noise_density == b.imu_noise.accel_noise_density &&
         a.imu_noise.gyro_noise_density == b.imu_noise.gyro_noise_density &&
         a.imu_noise.accel_bias_walk == b.imu_noise.accel_bias_walk &&
         a.imu_noise.gyro_bias_walk == b.imu_noise.gyro_bias_walk &&
         a.imu_noise.gravity == b.imu_noise.gravity &&
         a.virtual_cam.fov_deg == b.virtual_cam.fov_deg &&
         a.virtual_cam.width == b.virtual_cam.width &&
         a.virtual_cam.height == b.virtual_cam.height &&
         a.vio.window == b.vio.window && a.vio.max_features == b.vio.max_features &&
         a.vio.parallax_px == b.vio.parallax_px &&
         a.vio.min_tracked == b.vio.min_tracked &&
         a.vio.keyframe_dt == b.vio.keyframe_dt &&
         a.vio.pixel_sigma == b.vio.pixel_sigma &&
         a.vio.huber_delta == b.vio.huber_delta &&
         a.vio.static_init_time == b.vio.static_init_time &&
         a.vio.tracking_fov_deg == b.vio.tracking_fov_deg &&
         a.vio.tracking_width == b.vio.tracking_width &&
         a.vio.tracking_height == b.vio.tracking_height &&
         a.depth.min_disparity == b.depth.min_disparity &&
         a.depth.max_disparity == b.depth.max_disparity &&
         a.depth.voxel_leaf == b.depth.voxel_leaf && a.depth.z_min == b.depth.z_min &&
         a.depth.z_max == b.depth.z_max;
}

}  // namespace omni
