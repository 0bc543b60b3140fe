#include "sdexp/occupancy_map.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sdexp {

const char* to_string(VoxelState s) {
  switch (s) {
    case VoxelState::Unknown: return "unknown";
    case VoxelState::Free: return "free";
    case VoxelState::Occupied: return "occupied";
  }
  return "?";
}

void SensorModelParams::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument(std::string("sensor model: ") + name + " must lie in (0, 1)");
  };
  prob(p_hit, "p_hit");
  prob(p_miss, "p_miss");
  prob(p_min, "p_min");
  prob(p_max, "p_max");
  prob(occupancy_threshold, "occupancy_threshold");
  if (!(p_hit > 0.5)) throw std::invalid_argument("sensor model: p_hit must exceed 0.5");
  if (!(p_miss < 0.5)) throw std::invalid_argument("sensor model: p_miss must be below 0.5");
  if (!(p_min < 0.5 && p_max > 0.5)) throw std::invalid_argument("sensor model: clamps must bracket 0.5");
  if (!(variance_threshold >= 0.0)) throw std::invalid_argument("sensor model: variance threshold must be >= 0");
  if (!(k_sigma >= 0.0)) throw std::invalid_argument("sensor model: k_sigma must be >= 0");
}

OccupancyGrid::OccupancyGrid(const GridGeometry& geometry, const SensorModelParams& sensor, StorageKind storage)
    : geometry_(geometry),
      sensor_(sensor),
      occupied_logodds_(logit(sensor.occupancy_threshold)),
      store_(std::in_place_type<DenseVoxelStore>, geometry) {
  if (!(geometry.resolution > 0.0)) throw std::invalid_argument("occupancy grid: resolution must be positive");
  if ((geometry.dims.array() <= 0).any()) throw std::invalid_argument("occupancy grid: dims must be positive");
  sensor_.validate();
  if (storage == StorageKind::Octree) store_.emplace<OctreeVoxelStore>(geometry);
}

void OccupancyGrid::require(const VoxelIndex& v) const {
  if (!geometry_.contains(v)) {
    std::ostringstream os;
    os << "voxel index (" << v.x() << ", " << v.y() << ", " << v.z() << ") outside the map";
    throw std::invalid_argument(os.str());
  }
}

double OccupancyGrid::logodds(const VoxelIndex& v) const {
  require(v);
  const std::size_t lin = geometry_.linear(v);
  return std::visit([&](const auto& s) { return s.value(lin, v); }, store_);
}

bool OccupancyGrid::touched(const VoxelIndex& v) const {
  require(v);
  const std::size_t lin = geometry_.linear(v);
  return std::visit([&](const auto& s) { return s.touched(lin, v); }, store_);
}

VoxelState OccupancyGrid::state_unchecked(const VoxelIndex& v) const {
  const std::size_t lin = geometry_.linear(v);
  return std::visit([&](const auto& s) { return classify(s.touched(lin, v), s.value(lin, v)); }, store_);
}

VoxelState OccupancyGrid::state(const VoxelIndex& v) const {
  require(v);
  return state_unchecked(v);
}

void OccupancyGrid::update(const VoxelIndex& v, double delta) {
  require(v);
  const std::size_t lin = geometry_.linear(v);
  std::visit(
      [&](auto& s) {
        const double next = std::clamp(s.value(lin, v) + delta, sensor_.l_min(), sensor_.l_max());
        s.set(lin, v, next);
      },
      store_);
}

void OccupancyGrid::set_logodds(const VoxelIndex& v, double value) {
  require(v);
  const std::size_t lin = geometry_.linear(v);
  std::visit([&](auto& s) { s.set(lin, v, std::clamp(value, sensor_.l_min(), sensor_.l_max())); }, store_);
}

std::size_t OccupancyGrid::touched_count() const {
  return std::visit([](const auto& s) { return s.touched_count(); }, store_);
}

std::vector<std::size_t> OccupancyGrid::touched_indices() const {
  return std::visit([](const auto& s) { return s.touched_indices(); }, store_);
}

StateGrid snapshot_states(const OccupancyGrid& map) {
  StateGrid out{map.geometry(), std::vector<VoxelState>(map.geometry().size(), VoxelState::Unknown)};
  for (std::size_t lin : map.touched_indices()) {
    const VoxelIndex v = map.geometry().unravel(lin);
    out.states[lin] = map.classify(true, map.logodds(v));
  }
  return out;
}

namespace {

enum : std::uint8_t { kNoUpdate = 0, kMiss = 1, kHit = 2 };

}  // namespace

void integrate_frame(OccupancyGrid& map, const SemiDenseFrame& frame) {
  if (frame.measurements.empty()) return;
  const GridGeometry& g = map.geometry();
  const SensorModelParams& sensor = map.sensor_model();
  const Vec3 cam = frame.pose.position;
  if (!cam.allFinite()) throw std::invalid_argument("integrate_frame: non-finite camera pose");

  std::vector<std::uint8_t> mark(g.size(), kNoUpdate);
  std::vector<std::size_t> touched;

  struct Ray {
    Vec3 free_end;
    bool hit;
  };
  std::vector<Ray> rays;
  rays.reserve(frame.measurements.size());

  for (const PixelMeasurement& m : frame.measurements) {
    if (m.variance <= sensor.variance_threshold) {
      rays.push_back({frame.pose.apply(backproject(frame.intrinsics, m.u, m.v, m.depth)), true});
    } else {
      const double reduced = std::max(0.0, m.depth - sensor.k_sigma * std::sqrt(m.variance));
      if (reduced <= 0.0) continue;
      rays.push_back({frame.pose.apply(backproject(frame.intrinsics, m.u, m.v, reduced)), false});
    }
  }

  // hits first, so the misses of other rays cannot override them
  for (const Ray& r : rays) {
    if (!r.hit) continue;
    const VoxelIndex v = g.voxel_of(r.free_end);
    if (!g.contains(v)) continue;
    const std::size_t lin = g.linear(v);
    if (mark[lin] == kNoUpdate) touched.push_back(lin);
    mark[lin] = kHit;
  }

  for (const Ray& r : rays) {
    double t0 = 0.0;
    double t1 = 1.0;
    if (!clip_segment(g, cam, r.free_end, t0, t1)) continue;
    const Vec3 dir = r.free_end - cam;
    const Vec3 a = cam + t0 * dir;
    const Vec3 b = cam + t1 * dir;
    const VoxelIndex end_voxel = g.voxel_of(r.free_end);
    traverse_voxels(g, a, b, [&](const VoxelIndex& v, double) {
      if (v == end_voxel) return false;
      if (!g.contains(v)) return true;
      const std::size_t lin = g.linear(v);
      if (mark[lin] == kNoUpdate) {
        mark[lin] = kMiss;
        touched.push_back(lin);
      }
      return true;
    });
  }

  const double l_hit = sensor.l_hit();
  const double l_miss = sensor.l_miss();
  for (std::size_t lin : touched) map.update(g.unravel(lin), mark[lin] == kHit ? l_hit : l_miss);
}

VoxelState voxel_state(const OccupancyGrid& map, const VoxelIndex& index) { return map.state(index); }

StateCounts count_states(const OccupancyGrid& map) {
  StateCounts c;
  c.n_bbox = map.geometry().size();
  for (std::size_t lin : map.touched_indices()) {
    if (map.classify(true, map.logodds(map.geometry().unravel(lin))) == VoxelState::Occupied)
      ++c.n_occupied;
    else
      ++c.n_free;
  }
  c.n_unknown = c.n_bbox - c.n_free - c.n_occupied;
  return c;
}

GridGeometry lattice_geometry(const Vec3& lo, const Vec3& hi, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("lattice: resolution must be positive");
  GridGeometry g;
  g.resolution = resolution;
  VoxelIndex lo_i;
  VoxelIndex hi_i;
  for (int i = 0; i < 3; ++i) {
    lo_i[i] = static_cast<int>(std::floor(lo[i] / resolution + 1e-9));
    hi_i[i] = static_cast<int>(std::ceil(hi[i] / resolution - 1e-9));
    if (hi_i[i] <= lo_i[i]) hi_i[i] = lo_i[i] + 1;
  }
  g.origin = lo_i.cast<double>() * resolution;
  g.dims = hi_i - lo_i;
  return g;
}

std::pair<Vec3, Vec3> keyframe_bounds(std::span<const SemiDenseFrame> keyframes) {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const SemiDenseFrame& f : keyframes) {
    lo = lo.cwiseMin(f.pose.position);
    hi = hi.cwiseMax(f.pose.position);
    for (const PixelMeasurement& m : f.measurements) {
      const Vec3 p = f.pose.apply(backproject(f.intrinsics, m.u, m.v, m.depth));
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  }
  return {lo, hi};
}

OccupancyGrid regenerate(std::span<const SemiDenseFrame> keyframes, const RegenerateParams& params) {
  if (keyframes.empty()) throw std::invalid_argument("regenerate: no keyframes");
  Vec3 lo;
  Vec3 hi;
  if (params.bounds) {
    std::tie(lo, hi) = *params.bounds;
  } else {
    std::tie(lo, hi) = keyframe_bounds(keyframes);
    lo -= Vec3::Constant(params.margin);
    hi += Vec3::Constant(params.margin);
  }
  OccupancyGrid map(lattice_geometry(lo, hi, params.resolution), params.sensor, params.storage);
  for (const SemiDenseFrame& f : keyframes) {
    integrate_frame(map, f);
    if (params.body_half_extent) carve_free_box(map, f.pose.position, *params.body_half_extent);
  }
  return map;
}

void carve_free_box(OccupancyGrid& map, const Vec3& center, const Vec3& half_extent) {
  const GridGeometry& g = map.geometry();
  VoxelIndex lo;
  VoxelIndex hi;
  for (int a = 0; a < 3; ++a) {
    // voxel centers sit at origin + (i + 0.5) * res
    const double l = (center[a] - half_extent[a] - g.origin[a]) / g.resolution - 0.5;
    const double h = (center[a] + half_extent[a] - g.origin[a]) / g.resolution - 0.5;
    lo[a] = std::max(0, static_cast<int>(std::ceil(l)));
    hi[a] = std::min(g.dims[a] - 1, static_cast<int>(std::floor(h)));
  }
  const double miss = logit(map.sensor_model().p_miss);
  for (int k = lo.z(); k <= hi.z(); ++k)
    for (int j = lo.y(); j <= hi.y(); ++j)
      for (int i = lo.x(); i <= hi.x(); ++i) map.update(VoxelIndex(i, j, k), miss);
}

namespace {

template <class StateAt>
bool segment_all_free(const GridGeometry& g, Vec3 a, Vec3 b, StateAt&& state_at) {
  if (!g.contains_point(a) || !g.contains_point(b))
    throw std::invalid_argument("line_of_sight: endpoint outside the map");
  // fixed traversal order so that los(a, b) and los(b, a) agree bit for bit
  if (std::lexicographical_compare(b.data(), b.data() + 3, a.data(), a.data() + 3)) std::swap(a, b);
  bool clear = true;
  traverse_voxels(g, a, b, [&](const VoxelIndex& v, double) {
    if (state_at(v) != VoxelState::Free) clear = false;
    return clear;
  });
  return clear;
}

}  // namespace

bool line_of_sight(const OccupancyGrid& map, const Vec3& a, const Vec3& b) {
  return segment_all_free(map.geometry(), a, b, [&](const VoxelIndex& v) { return map.state_or_unknown(v); });
}

bool line_of_sight(const StateGrid& states, const Vec3& a, const Vec3& b) {
  return segment_all_free(states.geometry, a, b, [&](const VoxelIndex& v) { return states.at(v); });
}

}  // namespace sdexp
