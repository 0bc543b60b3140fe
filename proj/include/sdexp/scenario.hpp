#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdexp/geometry.hpp"
#include "sdexp/occupancy_map.hpp"
#include "sdexp/sensor_sim.hpp"
#include "sdexp/world.hpp"

namespace sdexp {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MapConfig {
  double resolution = 0.1;
  SensorModelParams sensor;
  StorageKind storage = StorageKind::Dense;
  double bounds_margin = 0.3;  // [m] added around the world's boxes
  /// Vehicle body volume carved free at every keyframe position; negative
  /// components: derived from the inflation radii, zero: disabled.
  Vec3 body_half_extent = Vec3::Constant(-1.0);
};

struct ExplorationConfig {
  int n_rays = 16;
  std::vector<double> heights;  // empty: three layers one voxel apart around the start height
  double margin = -1.0;         // negative: one voxel plus half a voxel
  std::size_t n_candidates = 8;
  int inflate_hor = 3;
  int inflate_ver = 1;
  bool include_candidate_height = false;
};

struct MissionConfig {
  Vec3 start = Vec3::Zero();
  int max_star_discoveries = 3;
  std::uint64_t seed = 1;
  int look_around_steps = 12;
  double look_around_amp = 0.1;
  double capture_spacing = 0.25;
  double position_noise = 0.0;
  double heading_noise = 0.0;
  double min_free_growth = 0.0;  // stop when a star discovery grows n_free by less (ratio); 0 disables
};

struct ScenarioConfig {
  std::vector<Box> boxes;
  CameraIntrinsics intrinsics;
  RenderParams render;
  MapConfig map;
  ExplorationConfig exploration;
  MissionConfig mission;
  std::string out_dir = "out";

  /// Fills derived defaults (heights, margin). Idempotent.
  void resolve();
  /// Throws ConfigError naming the offending parameter.
  void validate() const;
  WorldModel world() const { return WorldModel(boxes); }
  /// Fixed map extent: the world's bounding box plus map.bounds_margin.
  std::pair<Vec3, Vec3> map_bounds() const;
};

nlohmann::json to_json(const ScenarioConfig& c);
/// Unknown keys are rejected. Throws ConfigError.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const std::string& path, const ScenarioConfig& c);

nlohmann::json vec_to_json(const Vec3& v);
Vec3 vec_from_json(const nlohmann::json& j);

}  // namespace sdexp
