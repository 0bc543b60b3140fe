#include "sdexp/voxel_store.hpp"

#include <algorithm>

namespace sdexp {

namespace {
constexpr std::int32_t kNone = -1;
}

std::size_t DenseVoxelStore::touched_count() const {
  return static_cast<std::size_t>(std::count(touched_.begin(), touched_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> DenseVoxelStore::touched_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < touched_.size(); ++i)
    if (touched_[i]) out.push_back(i);
  return out;
}

OctreeVoxelStore::OctreeVoxelStore(const GridGeometry& g) : geometry_(g) {
  const int side = g.longest_side();
  while ((1 << depth_) < side) ++depth_;
  Node root;
  root.child.fill(kNone);
  nodes_.push_back(root);
}

int OctreeVoxelStore::octant(const VoxelIndex& v, int level) {
  return ((v.x() >> level) & 1) | (((v.y() >> level) & 1) << 1) | (((v.z() >> level) & 1) << 2);
}

std::int32_t OctreeVoxelStore::find_leaf(const VoxelIndex& v) const {
  if (depth_ == 0) return leaf_values_.empty() ? kNone : 0;
  std::int32_t node = 0;
  for (int level = depth_ - 1; level >= 0; --level) {
    const std::int32_t next = nodes_[static_cast<std::size_t>(node)].child[static_cast<std::size_t>(octant(v, level))];
    if (next == kNone) return kNone;
    node = next;
  }
  return node;  // at the bottom the slot holds a leaf index
}

double OctreeVoxelStore::value(std::size_t, const VoxelIndex& v) const {
  const std::int32_t leaf = find_leaf(v);
  return leaf == kNone ? 0.0 : leaf_values_[static_cast<std::size_t>(leaf)];
}

void OctreeVoxelStore::set(std::size_t linear, const VoxelIndex& v, double value) {
  if (depth_ == 0) {
    if (leaf_values_.empty()) {
      leaf_values_.push_back(value);
      leaf_linear_.push_back(linear);
    } else {
      leaf_values_[0] = value;
    }
    return;
  }
  std::size_t node = 0;
  for (int level = depth_ - 1; level >= 1; --level) {
    const auto slot = static_cast<std::size_t>(octant(v, level));
    std::int32_t next = nodes_[node].child[slot];
    if (next == kNone) {
      next = static_cast<std::int32_t>(nodes_.size());
      nodes_[node].child[slot] = next;
      Node fresh;
      fresh.child.fill(kNone);
      nodes_.push_back(fresh);
    }
    node = static_cast<std::size_t>(next);
  }
  const auto slot = static_cast<std::size_t>(octant(v, 0));
  std::int32_t leaf = nodes_[node].child[slot];
  if (leaf == kNone) {
    leaf = static_cast<std::int32_t>(leaf_values_.size());
    nodes_[node].child[slot] = leaf;
    leaf_values_.push_back(value);
    leaf_linear_.push_back(linear);
  } else {
    leaf_values_[static_cast<std::size_t>(leaf)] = value;
  }
}

std::vector<std::size_t> OctreeVoxelStore::touched_indices() const {
  std::vector<std::size_t> out = leaf_linear_;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sdexp
