#pragma once

#include <cstdint>
#include <vector>

#include "sdexp/occupancy_map.hpp"

namespace sdexp {

/// Free space shrunk by the vehicle extent. A voxel is blocked when any
/// Occupied, Unknown or out-of-bounds voxel lies within `hor` voxels
/// horizontally (Chebyshev) and `ver` voxels vertically.
class TraversabilityGrid {
 public:
  TraversabilityGrid(const GridGeometry& g, int hor, int ver, std::vector<std::uint8_t> traversable);

  const GridGeometry& geometry() const { return geometry_; }
  int hor() const { return hor_; }
  int ver() const { return ver_; }

  bool traversable(const VoxelIndex& v) const {
    return geometry_.contains(v) && traversable_[geometry_.linear(v)] != 0;
  }
  bool traversable(std::size_t linear) const { return traversable_[linear] != 0; }
  bool traversable_point(const Vec3& p) const { return traversable(geometry_.voxel_of(p)); }

  /// Every voxel touched by segment a-b is traversable.
  bool segment_traversable(const Vec3& a, const Vec3& b) const;

  std::size_t count_traversable() const;

 private:
  GridGeometry geometry_;
  int hor_;
  int ver_;
  std::vector<std::uint8_t> traversable_;
};

TraversabilityGrid inflate(const OccupancyGrid& map, int hor, int ver);
TraversabilityGrid inflate(const StateGrid& states, int hor, int ver);

}  // namespace sdexp
