#include "sdexp/traversability.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdexp {

TraversabilityGrid::TraversabilityGrid(const GridGeometry& g, int hor, int ver, std::vector<std::uint8_t> traversable)
    : geometry_(g), hor_(hor), ver_(ver), traversable_(std::move(traversable)) {
  if (traversable_.size() != g.size()) throw std::invalid_argument("traversability grid: size mismatch");
}

bool TraversabilityGrid::segment_traversable(const Vec3& a, const Vec3& b) const {
  bool ok = true;
  traverse_voxels(geometry_, a, b, [&](const VoxelIndex& v, double) {
    ok = traversable(v);
    return ok;
  });
  return ok;
}

std::size_t TraversabilityGrid::count_traversable() const {
  return static_cast<std::size_t>(std::count(traversable_.begin(), traversable_.end(), std::uint8_t{1}));
}

namespace {

// Box dilation of `blocked` along one axis with radius r; cells whose window
// reaches past the grid boundary become blocked.
void dilate_axis(std::vector<std::uint8_t>& blocked, const GridGeometry& g, int axis, int r) {
  if (r == 0) return;
  const VoxelIndex dims = g.dims;
  const int n = dims[axis];
  const std::size_t stride = axis == 0 ? 1 : axis == 1 ? static_cast<std::size_t>(dims.x())
                                                       : static_cast<std::size_t>(dims.x()) * static_cast<std::size_t>(dims.y());
  std::vector<int> prefix(static_cast<std::size_t>(n) + 1);
  std::vector<std::uint8_t> out(blocked.size());

  const int a1 = axis == 0 ? 1 : 0;
  const int a2 = axis == 2 ? 1 : 2;
  for (int p = 0; p < dims[a2]; ++p) {
    for (int q = 0; q < dims[a1]; ++q) {
      VoxelIndex start = VoxelIndex::Zero();
      start[a1] = q;
      start[a2] = p;
      const std::size_t base = g.linear(start);
      prefix[0] = 0;
      for (int c = 0; c < n; ++c)
        prefix[static_cast<std::size_t>(c) + 1] = prefix[static_cast<std::size_t>(c)] + blocked[base + stride * static_cast<std::size_t>(c)];
      for (int c = 0; c < n; ++c) {
        const int lo = c - r;
        const int hi = c + r;
        bool b = lo < 0 || hi >= n;
        if (!b) b = prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)] > 0;
        out[base + stride * static_cast<std::size_t>(c)] = b ? 1 : 0;
      }
    }
  }
  blocked.swap(out);
}

}  // namespace

TraversabilityGrid inflate(const StateGrid& states, int hor, int ver) {
  if (hor < 0 || ver < 0) throw std::invalid_argument("inflate: radii must be non-negative");
  const GridGeometry& g = states.geometry;
  std::vector<std::uint8_t> blocked(g.size());
  for (std::size_t i = 0; i < blocked.size(); ++i) blocked[i] = states.states[i] != VoxelState::Free ? 1 : 0;
  dilate_axis(blocked, g, 0, hor);
  dilate_axis(blocked, g, 1, hor);
  dilate_axis(blocked, g, 2, ver);
  for (auto& b : blocked) b = b ? 0 : 1;
  return TraversabilityGrid(g, hor, ver, std::move(blocked));
}

TraversabilityGrid inflate(const OccupancyGrid& map, int hor, int ver) { return inflate(snapshot_states(map), hor, ver); }

}  // namespace sdexp
