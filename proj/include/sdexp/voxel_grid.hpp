#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <limits>

#include <Eigen/Core>

#include "sdexp/geometry.hpp"

namespace sdexp {

using VoxelIndex = Eigen::Vector3i;

/// Index <-> world mapping of a bounded voxel lattice. Voxel (i,j,k) spans
/// [origin + res*(i,j,k), origin + res*(i+1,j+1,k+1)); a point on a shared
/// face belongs to the higher-index voxel.
struct GridGeometry {
  double resolution = 0.1;
  Vec3 origin = Vec3::Zero();
  VoxelIndex dims = VoxelIndex::Ones();

  std::size_t size() const {
    return static_cast<std::size_t>(dims.x()) * static_cast<std::size_t>(dims.y()) *
           static_cast<std::size_t>(dims.z());
  }

  bool contains(const VoxelIndex& v) const {
    return v.x() >= 0 && v.y() >= 0 && v.z() >= 0 && v.x() < dims.x() && v.y() < dims.y() && v.z() < dims.z();
  }

  bool contains_point(const Vec3& p) const { return contains(voxel_of(p)); }

  VoxelIndex voxel_of(const Vec3& p) const {
    const Vec3 q = (p - origin) / resolution;
    return {static_cast<int>(std::floor(q.x())), static_cast<int>(std::floor(q.y())),
            static_cast<int>(std::floor(q.z()))};
  }

  std::size_t linear(const VoxelIndex& v) const {
    return static_cast<std::size_t>(v.x()) +
           static_cast<std::size_t>(dims.x()) *
               (static_cast<std::size_t>(v.y()) + static_cast<std::size_t>(dims.y()) * static_cast<std::size_t>(v.z()));
  }

  VoxelIndex unravel(std::size_t idx) const {
    const auto nx = static_cast<std::size_t>(dims.x());
    const auto ny = static_cast<std::size_t>(dims.y());
    return {static_cast<int>(idx % nx), static_cast<int>((idx / nx) % ny), static_cast<int>(idx / (nx * ny))};
  }

  Vec3 center(const VoxelIndex& v) const { return origin + resolution * (v.cast<double>() + Vec3::Constant(0.5)); }

  Vec3 max_corner() const { return origin + resolution * dims.cast<double>(); }

  int longest_side() const { return dims.maxCoeff(); }

  bool operator==(const GridGeometry&) const = default;
};

/// Clips segment a->b to the grid box. Returns false when it misses the box;
/// otherwise t0 <= t1 are the parameters of the clipped part in [0, 1].
inline bool clip_segment(const GridGeometry& g, const Vec3& a, const Vec3& b, double& t0, double& t1) {
  const Vec3 lo = g.origin;
  const Vec3 hi = g.max_corner();
  const Vec3 d = b - a;
  t0 = 0.0;
  t1 = 1.0;
  for (int i = 0; i < 3; ++i) {
    if (d[i] == 0.0) {
      if (a[i] < lo[i] || a[i] >= hi[i]) return false;
      continue;
    }
    double ta = (lo[i] - a[i]) / d[i];
    double tb = (hi[i] - a[i]) / d[i];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

/// 3D grid traversal (Amanatides & Woo) from the voxel of `a` to the voxel of
/// `b`, inclusive, in order. `visit(index, t_enter)` returns false to stop;
/// t_enter is the segment parameter in [0, 1] at which the voxel is entered.
///
/// When the segment crosses an edge or corner exactly, every voxel touching
/// that edge/corner is visited, which makes the visited set independent of
/// the traversal direction. Indices are not bounds-checked.
template <class Visit>
void traverse_voxels(const GridGeometry& g, const Vec3& a, const Vec3& b, Visit&& visit) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kTieEps = 1e-12;

  const Vec3 pa = (a - g.origin) / g.resolution;
  const Vec3 pb = (b - g.origin) / g.resolution;
  const Vec3 d = pb - pa;

  VoxelIndex cur(static_cast<int>(std::floor(pa.x())), static_cast<int>(std::floor(pa.y())),
                 static_cast<int>(std::floor(pa.z())));
  const VoxelIndex end(static_cast<int>(std::floor(pb.x())), static_cast<int>(std::floor(pb.y())),
                       static_cast<int>(std::floor(pb.z())));

  std::array<int, 3> step{};
  std::array<int, 3> remaining{};
  std::array<double, 3> t_max{};
  std::array<double, 3> t_delta{};
  for (int i = 0; i < 3; ++i) {
    remaining[i] = std::abs(end[i] - cur[i]);
    if (remaining[i] == 0) {
      t_max[i] = kInf;
      t_delta[i] = kInf;
      continue;
    }
    step[i] = end[i] > cur[i] ? 1 : -1;
    const double boundary = step[i] > 0 ? cur[i] + 1.0 : static_cast<double>(cur[i]);
    t_max[i] = (boundary - pa[i]) / d[i];
    t_delta[i] = 1.0 / std::abs(d[i]);
  }

  if (!visit(static_cast<const VoxelIndex&>(cur), 0.0)) return;

  while (remaining[0] + remaining[1] + remaining[2] > 0) {
    double t_min = kInf;
    for (int i = 0; i < 3; ++i)
      if (remaining[i] > 0) t_min = std::min(t_min, t_max[i]);

    unsigned tied = 0;
    for (int i = 0; i < 3; ++i)
      if (remaining[i] > 0 && t_max[i] <= t_min + kTieEps) tied |= 1u << i;

    const double t_enter = std::max(0.0, t_min);
    if (std::popcount(tied) > 1) {
      // proper, non-empty subsets of the tied axes: the voxels sharing the
      // crossed edge/corner
      for (unsigned sub = (tied - 1) & tied; sub != 0; sub = (sub - 1) & tied) {
        VoxelIndex side = cur;
        for (int i = 0; i < 3; ++i)
          if (sub & (1u << i)) side[i] += step[i];
        if (!visit(static_cast<const VoxelIndex&>(side), t_enter)) return;
      }
    }
    for (int i = 0; i < 3; ++i) {
      if (!(tied & (1u << i))) continue;
      cur[i] += step[i];
      t_max[i] += t_delta[i];
      --remaining[i];
    }
    if (!visit(static_cast<const VoxelIndex&>(cur), t_enter)) return;
  }
}

}  // namespace sdexp
