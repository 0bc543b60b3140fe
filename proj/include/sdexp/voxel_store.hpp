#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sdexp/voxel_grid.hpp"

namespace sdexp {

enum class StorageKind { Dense, Octree };

/// Flat array store: one log-odds value and one touched flag per voxel.
class DenseVoxelStore {
 public:
  explicit DenseVoxelStore(const GridGeometry& g) : values_(g.size(), 0.0), touched_(g.size(), 0) {}

  double value(std::size_t linear, const VoxelIndex&) const { return values_[linear]; }
  bool touched(std::size_t linear, const VoxelIndex&) const { return touched_[linear] != 0; }
  void set(std::size_t linear, const VoxelIndex&, double v) {
    values_[linear] = v;
    touched_[linear] = 1;
  }
  std::size_t touched_count() const;
  /// Linear indices of touched voxels, ascending.
  std::vector<std::size_t> touched_indices() const;

 private:
  std::vector<double> values_;
  std::vector<std::uint8_t> touched_;
};

/// Sparse pointer-free octree: inner nodes hold 8 child slots, the last level
/// indexes into a leaf value array. Untouched space costs nothing.
class OctreeVoxelStore {
 public:
  explicit OctreeVoxelStore(const GridGeometry& g);

  double value(std::size_t linear, const VoxelIndex& v) const;
  bool touched(std::size_t, const VoxelIndex& v) const { return find_leaf(v) >= 0; }
  void set(std::size_t linear, const VoxelIndex& v, double value);
  std::size_t touched_count() const { return leaf_values_.size(); }
  std::vector<std::size_t> touched_indices() const;
  int depth() const { return depth_; }

 private:
  struct Node {
    std::array<std::int32_t, 8> child;
  };
  static int octant(const VoxelIndex& v, int level);
  std::int32_t find_leaf(const VoxelIndex& v) const;

  GridGeometry geometry_;
  int depth_ = 0;
  std::vector<Node> nodes_;
  std::vector<double> leaf_values_;
  std::vector<std::size_t> leaf_linear_;
};

}  // namespace sdexp
