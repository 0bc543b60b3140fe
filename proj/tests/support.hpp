#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sdexp/occupancy_map.hpp"
#include "sdexp/random.hpp"

namespace sdexp::test {

inline Vec3 random_point(Rng& rng, const Vec3& lo, const Vec3& hi) {
  return {rng.uniform(lo.x(), hi.x()), rng.uniform(lo.y(), hi.y()), rng.uniform(lo.z(), hi.z())};
}

inline Vec3 random_unit(Rng& rng) {
  for (;;) {
    const Vec3 v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double n = v.norm();
    if (n > 0.1 && n <= 1.0) return v / n;
  }
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

/// Voxels whose closed box the segment a-b touches, found by testing every
/// voxel of the segment's bounding box with the slab method.
inline std::vector<VoxelIndex> segment_voxels_by_slabs(const GridGeometry& g, const Vec3& a, const Vec3& b) {
  std::vector<VoxelIndex> out;
  const VoxelIndex lo = g.voxel_of(a.cwiseMin(b)) - VoxelIndex::Ones();
  const VoxelIndex hi = g.voxel_of(a.cwiseMax(b)) + VoxelIndex::Ones();
  const Vec3 d = b - a;
  for (int k = lo.z(); k <= hi.z(); ++k)
    for (int j = lo.y(); j <= hi.y(); ++j)
      for (int i = lo.x(); i <= hi.x(); ++i) {
        const Vec3 bmin = g.origin + g.resolution * Vec3(i, j, k);
        const Vec3 bmax = bmin + Vec3::Constant(g.resolution);
        double t0 = 0.0;
        double t1 = 1.0;
        bool hit = true;
        for (int ax = 0; ax < 3 && hit; ++ax) {
          if (d[ax] == 0.0) {
            hit = a[ax] >= bmin[ax] && a[ax] <= bmax[ax];
            continue;
          }
          double ta = (bmin[ax] - a[ax]) / d[ax];
          double tb = (bmax[ax] - a[ax]) / d[ax];
          if (ta > tb) std::swap(ta, tb);
          t0 = std::max(t0, ta);
          t1 = std::min(t1, tb);
          hit = t0 <= t1 + 1e-12;
        }
        if (hit) out.emplace_back(i, j, k);
      }
  return out;
}

/// Line-of-sight by sampling the segment densely.
inline bool los_by_sampling(const StateGrid& s, const Vec3& a, const Vec3& b, int samples) {
  for (int n = 0; n <= samples; ++n) {
    const Vec3 p = a + (b - a) * (static_cast<double>(n) / samples);
    const VoxelIndex v = s.geometry.voxel_of(p);
    if (!s.geometry.contains(v) || s.at(v) != VoxelState::Free) return false;
  }
  return true;
}

/// Random state grid: each voxel Free with probability p_free, otherwise
/// Occupied or Unknown with equal odds.
inline StateGrid random_states(Rng& rng, const GridGeometry& g, double p_free) {
  StateGrid s{g, std::vector<VoxelState>(g.size())};
  for (auto& st : s.states) {
    if (rng.uniform01() < p_free)
      st = VoxelState::Free;
    else
      st = rng.uniform01() < 0.5 ? VoxelState::Occupied : VoxelState::Unknown;
  }
  return s;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

/// 6-connected components by union-find over all voxel pairs in `voxels`,
/// as a sorted list of sorted index lists.
inline std::vector<std::vector<std::size_t>> components_by_union_find(const GridGeometry& g,
                                                                      const std::vector<std::size_t>& voxels) {
  std::vector<std::uint8_t> in(g.size(), 0);
  for (auto v : voxels) in[v] = 1;
  UnionFind uf(g.size());
  for (auto v : voxels) {
    const VoxelIndex p = g.unravel(v);
    for (int ax = 0; ax < 3; ++ax) {
      VoxelIndex q = p;
      q[ax] += 1;
      if (g.contains(q) && in[g.linear(q)]) uf.unite(v, g.linear(q));
    }
  }
  std::vector<std::vector<std::size_t>> groups(g.size());
  for (auto v : voxels) groups[uf.find(v)].push_back(v);
  std::vector<std::vector<std::size_t>> out;
  for (auto& grp : groups)
    if (!grp.empty()) {
      std::sort(grp.begin(), grp.end());
      out.push_back(std::move(grp));
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sdexp::test
