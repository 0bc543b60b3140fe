#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sdexp/occupancy_map.hpp"
#include "sdexp/sensor_sim.hpp"
#include "sdexp/traversability.hpp"

namespace sdexp {

struct NoPlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StarParams {
  int n_rays = 16;
  std::vector<double> heights;  // absolute z [m] of the candidate layers
  double margin = 0.15;         // [m] kept clear of the first blocked voxel
};

struct StarLeg {
  double angle;  // [rad], ray direction in the horizontal plane
  double reach;  // [m]
  Vec3 endpoint;
};

/// Out-and-back legs from one origin, flown facing 90 degrees left of the
/// outbound direction. Waypoints alternate (leg endpoint, origin).
struct StarPlan {
  Vec3 origin = Vec3::Zero();
  int height_index = 0;  // voxel layer of the origin
  std::vector<StarLeg> legs;
  std::vector<Waypoint> waypoints;
  double total_length = 0.0;  // flown distance, 2 * sum of reaches
};

/// Casts params.n_rays horizontal rays at every candidate height from the
/// origin's (x, y) and keeps the height with the largest summed reach. Legs
/// shorter than one voxel are dropped. Throws NoPlanError when the origin is
/// blocked at every height.
StarPlan plan_star_discovery(const TraversabilityGrid& trav, const Vec3& origin, const StarParams& params);

/// 1 for every Free voxel whose center is in line of sight of the center of
/// some origin's voxel.
std::vector<std::uint8_t> mark_visited(const StateGrid& states, std::span<const Vec3> origins);

/// Traversable voxels not visited, as ascending linear indices.
std::vector<std::size_t> interesting_voxels(const TraversabilityGrid& trav, std::span<const std::uint8_t> visited);

using Component = std::vector<std::size_t>;

/// 6-connected components, each sorted ascending; ordered by size
/// (descending), then by smallest index.
std::vector<Component> connected_components(const GridGeometry& g, std::span<const std::size_t> voxels);

struct OriginChoice {
  std::size_t voxel = 0;
  Vec3 origin = Vec3::Zero();
  StarPlan plan;
  std::size_t candidates_evaluated = 0;
};

struct SelectionParams {
  std::size_t n_candidates = 8;
  StarParams star;
  bool include_candidate_height = false;  // also plan at the candidate voxel's own z
  std::uint64_t seed = 0;
};

/// Samples distinct candidates from components.front() and returns the one
/// admitting the longest star discovery (ties: smaller voxel index). Throws
/// NoPlanError when none admits a non-empty plan.
OriginChoice select_next_origin(const TraversabilityGrid& trav, std::span<const Component> components,
                                const SelectionParams& params);

struct PlannedPath {
  std::vector<std::size_t> voxels;  // raw A* chain, start to goal
  std::vector<Vec3> waypoints;      // after shortcutting, starts at `from`, ends at `to`
  double length = 0.0;
};

/// A* over 6-connected traversable voxels with a Euclidean heuristic, then
/// greedy shortcutting. nullopt when either endpoint is blocked or no path
/// exists. Throws std::invalid_argument for endpoints outside the grid.
std::optional<PlannedPath> plan_path(const TraversabilityGrid& trav, const Vec3& from, const Vec3& to);

}  // namespace sdexp
