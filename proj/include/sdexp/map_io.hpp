#pragma once

#include <iosfwd>
#include <string>

#include "sdexp/occupancy_map.hpp"

namespace sdexp {

/// Text map format: `# resolution`, `# origin`, `# dims` header lines, then
/// one touched voxel per line as `i j k logodds state`.
void write_map_text(std::ostream& os, const OccupancyGrid& map);
void save_map_text(const std::string& path, const OccupancyGrid& map);

/// Throws std::runtime_error on malformed input.
OccupancyGrid read_map_text(std::istream& is, const SensorModelParams& sensor = {});
OccupancyGrid load_map_text(const std::string& path, const SensorModelParams& sensor = {});

/// Wavefront OBJ of the exposed faces of Occupied voxels.
void write_occupied_mesh_obj(std::ostream& os, const OccupancyGrid& map);
void save_occupied_mesh_obj(const std::string& path, const OccupancyGrid& map);

}  // namespace sdexp
