#include "sdexp/map_io.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace sdexp {

void write_map_text(std::ostream& os, const OccupancyGrid& map) {
  const GridGeometry& g = map.geometry();
  os << std::setprecision(17);
  os << "# resolution " << g.resolution << '\n';
  os << "# origin " << g.origin.x() << ' ' << g.origin.y() << ' ' << g.origin.z() << '\n';
  os << "# dims " << g.dims.x() << ' ' << g.dims.y() << ' ' << g.dims.z() << '\n';
  os << "# occupancy_threshold " << map.sensor_model().occupancy_threshold << '\n';
  for (std::size_t lin : map.touched_indices()) {
    const VoxelIndex v = g.unravel(lin);
    const double l = map.logodds(v);
    os << v.x() << ' ' << v.y() << ' ' << v.z() << ' ' << l << ' ' << to_string(map.classify(true, l)) << '\n';
  }
}

void save_map_text(const std::string& path, const OccupancyGrid& map) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write map file '" + path + "'");
  write_map_text(os, map);
}

OccupancyGrid read_map_text(std::istream& is, const SensorModelParams& sensor_in) {
  SensorModelParams sensor = sensor_in;
  GridGeometry g;
  bool have_res = false, have_origin = false, have_dims = false;
  std::vector<std::pair<VoxelIndex, double>> voxels;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "resolution") {
        have_res = static_cast<bool>(ls >> g.resolution);
      } else if (key == "origin") {
        have_origin = static_cast<bool>(ls >> g.origin.x() >> g.origin.y() >> g.origin.z());
      } else if (key == "dims") {
        have_dims = static_cast<bool>(ls >> g.dims.x() >> g.dims.y() >> g.dims.z());
      } else if (key == "occupancy_threshold") {
        ls >> sensor.occupancy_threshold;
      }
      continue;
    }
    VoxelIndex v;
    double l = 0.0;
    std::string state;
    if (!(ls >> v.x() >> v.y() >> v.z() >> l >> state))
      throw std::runtime_error("map file: malformed voxel line " + std::to_string(line_no));
    voxels.emplace_back(v, l);
  }
  if (!have_res || !have_origin || !have_dims) throw std::runtime_error("map file: missing header line");
  OccupancyGrid map(g, sensor);
  for (const auto& [v, l] : voxels) {
    if (!g.contains(v)) throw std::runtime_error("map file: voxel outside dims");
    map.set_logodds(v, l);
  }
  return map;
}

OccupancyGrid load_map_text(const std::string& path, const SensorModelParams& sensor) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read map file '" + path + "'");
  try {
    return read_map_text(is, sensor);
  } catch (const std::exception& e) {
    throw std::runtime_error("'" + path + "': " + e.what());
  }
}

void write_occupied_mesh_obj(std::ostream& os, const OccupancyGrid& map) {
  const GridGeometry& g = map.geometry();
  std::map<std::tuple<int, int, int>, std::size_t> vertex_id;
  std::vector<VoxelIndex> vertices;
  std::vector<std::array<std::size_t, 4>> faces;

  auto vid = [&](const VoxelIndex& c) {
    auto [it, inserted] = vertex_id.try_emplace({c.x(), c.y(), c.z()}, vertices.size() + 1);
    if (inserted) vertices.push_back(c);
    return it->second;
  };

  for (std::size_t lin : map.touched_indices()) {
    const VoxelIndex v = g.unravel(lin);
    if (map.state(v) != VoxelState::Occupied) continue;
    for (int axis = 0; axis < 3; ++axis) {
      for (int side = 0; side < 2; ++side) {
        VoxelIndex n = v;
        n[axis] += side ? 1 : -1;
        if (map.state_or_unknown(n) == VoxelState::Occupied) continue;
        const int u = (axis + 1) % 3;
        const int w = (axis + 2) % 3;
        VoxelIndex c = v;
        c[axis] += side;
        std::array<VoxelIndex, 4> q{c, c, c, c};
        q[1][u] += 1;
        q[2][u] += 1;
        q[2][w] += 1;
        q[3][w] += 1;
        if (side == 0) std::swap(q[1], q[3]);  // outward winding
        faces.push_back({vid(q[0]), vid(q[1]), vid(q[2]), vid(q[3])});
      }
    }
  }

  os << std::setprecision(10) << "# occupied voxel surface\n";
  for (const VoxelIndex& c : vertices) {
    const Vec3 p = g.origin + g.resolution * c.cast<double>();
    os << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  }
  for (const auto& f : faces) os << "f " << f[0] << ' ' << f[1] << ' ' << f[2] << ' ' << f[3] << '\n';
}

void save_occupied_mesh_obj(const std::string& path, const OccupancyGrid& map) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write mesh file '" + path + "'");
  write_occupied_mesh_obj(os, map);
}

}  // namespace sdexp
