#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdexp/exploration.hpp"
#include "sdexp/occupancy_map.hpp"
#include "sdexp/scenario.hpp"

namespace sdexp {

/// Per-phase run-time and map statistics. Timings are wall clock and absent
/// for steps the phase did not run.
struct MissionMetrics {
  std::optional<double> t_map_build_s;
  std::optional<double> t_inflate_s;
  std::optional<double> t_mark_visible_s;
  std::optional<double> t_path_s;
  std::size_t n_bbox = 0;
  std::size_t n_free = 0;
  std::size_t n_occupied = 0;
  std::optional<double> free_over_known;  // absent when nothing is known
  double free_over_bbox = 0.0;
  std::size_t n_keyframes = 0;
  std::size_t n_points = 0;
};

MissionMetrics counters_from(const StateCounts& counts, std::size_t n_keyframes, std::size_t n_points);

enum class PhaseKind { LookAround, StarDiscovery, Reposition };

struct PhaseRecord {
  std::string name;  // "look-around", "star-discovery-<k>", "reposition-<k>"
  PhaseKind kind = PhaseKind::LookAround;
  int index = 0;
  /// Keyframes of the map the flown plan was computed on (0 for the look-around).
  std::size_t plan_keyframes = 0;
  std::size_t first_keyframe = 0;
  std::vector<Pose> poses;  // commanded camera poses, one keyframe each
  std::vector<Waypoint> commanded;
  std::optional<StarPlan> star;
  std::optional<OriginChoice> next_origin;
  std::optional<PlannedPath> path;
  std::size_t n_interesting = 0;
  std::size_t n_components = 0;
  std::size_t largest_component = 0;
  MissionMetrics metrics;
  std::optional<OccupancyGrid> map;  // snapshot after the phase
};

struct MissionLog {
  ScenarioConfig config;
  std::vector<PhaseRecord> phases;
  std::vector<SemiDenseFrame> keyframes;
  std::vector<std::uint64_t> frame_seeds;
  std::vector<Vec3> star_origins;
  std::string status;
};

inline constexpr const char* kStatusMaxDiscoveries = "max-discoveries-reached";
inline constexpr const char* kStatusComplete = "exploration-complete-or-blocked";
inline constexpr const char* kStatusLowGrowth = "free-growth-below-threshold";

/// Seed of the semi-dense render of keyframe `index`.
std::uint64_t frame_seed(std::uint64_t mission_seed, std::size_t index);

RegenerateParams regenerate_params(const ScenarioConfig& config);

/// Look-around, then up to max_star_discoveries rounds of
/// star discovery -> regenerate -> visited/interesting/components ->
/// next origin -> path -> reposition. Throws ConfigError before any phase
/// runs when the config is invalid.
MissionLog run_mission(const ScenarioConfig& config);

/// Machine-readable counters (deterministic) and wall-clock timings as CSV.
void write_metrics_csv(std::ostream& os, const MissionLog& log);
void write_timings_csv(std::ostream& os, const MissionLog& log);
/// Aligned human-readable table; timings included when requested.
void write_metrics_table(std::ostream& os, const MissionLog& log, bool with_timings);

void write_waypoints(std::ostream& os, const std::vector<Waypoint>& waypoints);

nlohmann::json mission_log_to_json(const MissionLog& log, bool with_timings = true);

/// Writes metrics, map snapshots, mesh, waypoint files and the mission log
/// under `dir` (created if missing).
void write_mission_outputs(const MissionLog& log, const std::string& dir);

struct ReplayResult {
  OccupancyGrid map;
  std::size_t n_keyframes;
  std::size_t n_points;
  StateCounts logged;  // counters of the last logged phase
};

/// Re-renders every logged keyframe pose with its logged seed and regenerates
/// the map.
ReplayResult replay_mission_log(const nlohmann::json& log);

}  // namespace sdexp
