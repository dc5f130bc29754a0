#pragma once

#include <array>
#include <string>

#include "omni/io/errors.hpp"
#include "omni/io/trajectory_io.hpp"
#include "omni/stereo/image.hpp"
#include "omni/synth/trajectory.hpp"
#include "omni/vio/imu.hpp"

namespace omni {

/// Binary PGM (P5), 8-bit.
void write_pgm(const std::string& path, const Image& img);
Image read_pgm(const std::string& path);

/// One sample per row: `t gx gy gz ax ay az`.
void write_imu_csv(const std::string& path, const std::vector<ImuSample>& samples);
std::vector<ImuSample> read_imu_csv(const std::string& path);

/// On-disk layout of a simulated sequence:
///   manifest.json          parameters + seed + frame timing
///   imu.csv                IMU stream
///   groundtruth.tum        reference trajectory at frame times
///   frames/NNNNNN_cK.pgm   fisheye image, frame NNNNNN, camera K
struct DatasetInfo {
  uint32_t seed = 0;
  double fps = 20.0;
  int num_frames = 0;
  double imu_rate_hz = 500.0;
  TrajectorySpec trajectory;
  std::string scene = "room";
  double room_half_size = 3.0;
  double room_height = 2.0;
  bool zero_noise = false;

  double frame_time(int index) const { return index / fps; }
};

void write_manifest(const std::string& path, const DatasetInfo& info);
DatasetInfo read_manifest(const std::string& path);

std::string frame_path(const std::string& dir, int frame, int camera);

/// Loads one frame's four fisheye images.
std::array<Image, 4> read_frame(const std::string& dir, int frame);

}  // namespace omni
