#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sdexp/geometry.hpp"
#include "sdexp/voxel_grid.hpp"
#include "sdexp/voxel_store.hpp"

namespace sdexp {

inline double logit(double p) { return std::log(p / (1.0 - p)); }
inline double logistic(double l) { return 1.0 / (1.0 + std::exp(-l)); }

/// Inverse sensor model and measurement gating. Probabilities, not log-odds.
struct SensorModelParams {
  double p_hit = 0.7;
  double p_miss = 0.4;
  double p_min = 0.12;
  double p_max = 0.97;
  double occupancy_threshold = 0.86;
  double variance_threshold = 0.01;  // [m^2]; above: free space only, on a reduced range
  double k_sigma = 2.0;              // reduced range = depth - k_sigma * stddev

  double l_hit() const { return logit(p_hit); }
  double l_miss() const { return logit(p_miss); }
  double l_min() const { return logit(p_min); }
  double l_max() const { return logit(p_max); }

  void validate() const;
};

/// One keyframe: camera pose (world <- camera) and its sparse depth pixels.
struct SemiDenseFrame {
  Pose pose;
  CameraIntrinsics intrinsics;
  std::vector<PixelMeasurement> measurements;
};

enum class VoxelState : std::uint8_t { Unknown, Free, Occupied };

const char* to_string(VoxelState s);

/// Bounded log-odds occupancy grid. Never-touched voxels hold exactly 0 and
/// are Unknown; stored values are clamped to [l_min, l_max].
class OccupancyGrid {
 public:
  OccupancyGrid(const GridGeometry& geometry, const SensorModelParams& sensor = {},
                StorageKind storage = StorageKind::Dense);

  const GridGeometry& geometry() const { return geometry_; }
  const SensorModelParams& sensor_model() const { return sensor_; }
  StorageKind storage_kind() const { return store_.index() == 0 ? StorageKind::Dense : StorageKind::Octree; }

  bool contains(const VoxelIndex& v) const { return geometry_.contains(v); }

  /// Throw std::invalid_argument for out-of-bounds indices.
  double logodds(const VoxelIndex& v) const;
  bool touched(const VoxelIndex& v) const;
  VoxelState state(const VoxelIndex& v) const;

  /// Out-of-bounds space reads as Unknown.
  VoxelState state_or_unknown(const VoxelIndex& v) const { return contains(v) ? state_unchecked(v) : VoxelState::Unknown; }

  /// Adds `delta` to the voxel's log-odds, clamps, marks it touched.
  void update(const VoxelIndex& v, double delta);
  /// Stores a log-odds value (clamped) and marks the voxel touched.
  void set_logodds(const VoxelIndex& v, double value);

  std::size_t touched_count() const;
  /// Linear indices of touched voxels in ascending order.
  std::vector<std::size_t> touched_indices() const;

  VoxelState classify(bool touched, double logodds) const {
    if (!touched) return VoxelState::Unknown;
    return logodds > occupied_logodds_ ? VoxelState::Occupied : VoxelState::Free;
  }

 private:
  VoxelState state_unchecked(const VoxelIndex& v) const;
  void require(const VoxelIndex& v) const;

  GridGeometry geometry_;
  SensorModelParams sensor_;
  double occupied_logodds_;
  std::variant<DenseVoxelStore, OctreeVoxelStore> store_;
};

/// Dense snapshot of voxel states, for algorithms that sweep the grid.
struct StateGrid {
  GridGeometry geometry;
  std::vector<VoxelState> states;

  VoxelState at(const VoxelIndex& v) const {
    return geometry.contains(v) ? states[geometry.linear(v)] : VoxelState::Unknown;
  }
};

StateGrid snapshot_states(const OccupancyGrid& map);

/// Ray-casts every measurement of the frame into the map. Within one frame a
/// voxel receives at most one update and a hit outranks a miss.
void integrate_frame(OccupancyGrid& map, const SemiDenseFrame& frame);

VoxelState voxel_state(const OccupancyGrid& map, const VoxelIndex& index);

struct StateCounts {
  std::size_t n_free = 0;
  std::size_t n_occupied = 0;
  std::size_t n_unknown = 0;
  std::size_t n_bbox = 0;

  bool operator==(const StateCounts&) const = default;
};

StateCounts count_states(const OccupancyGrid& map);

struct RegenerateParams {
  double resolution = 0.1;
  SensorModelParams sensor;
  StorageKind storage = StorageKind::Dense;
  double margin = 0.5;  // [m] around the keyframes' bounding volume
  /// Fixed world-aligned extent; when set the bounding volume is not derived
  /// from the keyframes.
  std::optional<std::pair<Vec3, Vec3>> bounds;
  /// Half extent of the vehicle body; when set, the box around every keyframe
  /// position is carved free after that frame is integrated.
  std::optional<Vec3> body_half_extent;
};

/// One miss update for every voxel whose center lies in the axis-aligned box
/// center +- half_extent (clipped to the map).
void carve_free_box(OccupancyGrid& map, const Vec3& center, const Vec3& half_extent);

/// Grid covering [lo, hi] on a lattice anchored at integer multiples of the
/// resolution.
GridGeometry lattice_geometry(const Vec3& lo, const Vec3& hi, double resolution);

/// Camera centers and measured points of all keyframes.
std::pair<Vec3, Vec3> keyframe_bounds(std::span<const SemiDenseFrame> keyframes);

/// Fresh map from the keyframes integrated in order.
OccupancyGrid regenerate(std::span<const SemiDenseFrame> keyframes, const RegenerateParams& params);

/// True iff every voxel intersected by segment a-b is Free. Throws
/// std::invalid_argument when an endpoint lies outside the map.
bool line_of_sight(const OccupancyGrid& map, const Vec3& a, const Vec3& b);
bool line_of_sight(const StateGrid& states, const Vec3& a, const Vec3& b);

}  // namespace sdexp
