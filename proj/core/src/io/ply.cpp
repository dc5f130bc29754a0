#include "omni/io/ply.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace omni {

void write_ply(const std::string& path, const PointCloud& cloud, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);

  out << "ply\n"
      << (binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n")
      << "element vertex " << cloud.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "property float intensity\n"
      << "end_header\n";

  if (binary) {
    for (const CloudPoint& p : cloud.points) {
      const float row[4] = {float(p.position.x()), float(p.position.y()),
                            float(p.position.z()), p.intensity};
      out.write(reinterpret_cast<const char*>(row), sizeof(row));
    }
  } else {
    char line[128];
    for (const CloudPoint& p : cloud.points) {
      std::snprintf(line, sizeof(line), "%.9g %.9g %.9g %.9g\n", p.position.x(),
                    p.position.y(), p.position.z(), double(p.intensity));
      out << line;
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

PointCloud read_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);

  std::string line;
  if (!std::getline(in, line) || line != "ply") throw ParseError(path + ": not a PLY file");

  bool binary = false;
  size_t count = 0;
  std::vector<std::string> properties;
  while (std::getline(in, line)) {
    std::istringstream iss(line);
    std::string word;
    iss >> word;
    if (word == "format") {
      std::string fmt;
      iss >> fmt;
      if (fmt == "binary_little_endian")
        binary = true;
      else if (fmt != "ascii")
        throw ParseError(path + ": unsupported PLY format " + fmt);
    } else if (word == "element") {
      std::string name;
      iss >> name >> count;
      if (name != "vertex") throw ParseError(path + ": unsupported element " + name);
    } else if (word == "property") {
      std::string type, name;
      iss >> type >> name;
      if (type != "float") throw ParseError(path + ": unsupported property type " + type);
      properties.push_back(name);
    } else if (word == "end_header") {
      break;
    }
  }
  if (properties.size() != 4 || properties[0] != "x" || properties[1] != "y" ||
      properties[2] != "z" || properties[3] != "intensity")
    throw ParseError(path + ": unexpected property layout");

  PointCloud cloud;
  cloud.points.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    float row[4];
    if (binary) {
      in.read(reinterpret_cast<char*>(row), sizeof(row));
      if (!in) throw ParseError(path + ": truncated vertex data");
    } else {
      if (!(in >> row[0] >> row[1] >> row[2] >> row[3]))
        throw ParseError(path + ": malformed vertex row");
    }
    CloudPoint p;
    p.position = Vec3(row[0], row[1], row[2]);
    p.intensity = row[3];
    cloud.points.push_back(p);
  }
  return cloud;
}

}  // namespace omni
