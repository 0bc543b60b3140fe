#include "sdexp/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdexp {

namespace {

constexpr std::array<const char*, 6> kFaceNames{"-x", "+x", "-y", "+y", "-z", "+z"};

}  // namespace

const char* face_name(int face_id) { return kFaceNames.at(static_cast<std::size_t>(face_id)); }

int parse_face_name(const std::string& name) {
  for (std::size_t i = 0; i < kFaceNames.size(); ++i)
    if (name == kFaceNames[i]) return static_cast<int>(i);
  throw std::invalid_argument("unknown face '" + name + "' (expected -x, +x, -y, +y, -z or +z)");
}

WorldModel::WorldModel(std::vector<Box> boxes) : boxes_(std::move(boxes)) {
  for (std::size_t bi = 0; bi < boxes_.size(); ++bi) {
    const Box& b = boxes_[bi];
    if (!((b.max - b.min).array() > 0.0).all())
      throw std::invalid_argument("box '" + b.name + "' must have positive extent");
    for (int f = 0; f < 6; ++f) {
      Face face;
      face.box = static_cast<int>(bi);
      face.face_id = f;
      face.axis = f / 2;
      face.coord = (f % 2) ? b.max[face.axis] : b.min[face.axis];
      face.lo = b.min;
      face.hi = b.max;
      face.lo[face.axis] = face.hi[face.axis] = face.coord;
      face.textured = b.textured[static_cast<std::size_t>(f)];

      const int u = (face.axis + 1) % 3;
      std::array<Vec3, 4> c{face.lo, face.lo, face.hi, face.hi};
      c[1][u] = face.hi[u];
      c[3][u] = face.lo[u];
      for (int k = 0; k < 4; ++k) face.edges.push_back({c[static_cast<std::size_t>(k)], c[static_cast<std::size_t>((k + 1) % 4)]});

      for (const EdgeSegment& e : b.extra_edges[static_cast<std::size_t>(f)]) {
        for (const Vec3& p : {e.a, e.b}) {
          const bool on_plane = std::abs(p[face.axis] - face.coord) <= 1e-6;
          const bool inside = ((p - face.lo).array() >= -1e-6).all() && ((face.hi - p).array() >= -1e-6).all();
          if (!on_plane || !inside)
            throw std::invalid_argument("edge feature on box '" + b.name + "' face " + face_name(f) +
                                        " does not lie on the face");
        }
        face.edges.push_back(e);
      }
      faces_.push_back(std::move(face));
    }
  }
}

std::optional<RayHit> WorldModel::intersect(const Vec3& origin, const Vec3& dir, double t_min) const {
  double best = std::numeric_limits<double>::infinity();
  int best_face = -1;
  for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
    const Face& f = faces_[fi];
    const double d = dir[f.axis];
    if (d == 0.0) continue;
    const double t = (f.coord - origin[f.axis]) / d;
    if (!(t > t_min) || t >= best) continue;
    const int u = (f.axis + 1) % 3;
    const int w = (f.axis + 2) % 3;
    const double pu = origin[u] + t * dir[u];
    const double pw = origin[w] + t * dir[w];
    if (pu < f.lo[u] || pu > f.hi[u] || pw < f.lo[w] || pw > f.hi[w]) continue;
    best = t;
    best_face = static_cast<int>(fi);
  }
  if (best_face < 0) return std::nullopt;
  return RayHit{best, best_face};
}

bool WorldModel::inside_solid(const Vec3& p) const {
  for (const Box& b : boxes_)
    if (b.solid && (p.array() > b.min.array()).all() && (p.array() < b.max.array()).all()) return true;
  return false;
}

std::pair<Vec3, Vec3> WorldModel::bounds() const {
  if (boxes_.empty()) return {Vec3::Zero(), Vec3::Zero()};
  Vec3 lo = boxes_.front().min;
  Vec3 hi = boxes_.front().max;
  for (const Box& b : boxes_) {
    lo = lo.cwiseMin(b.min);
    hi = hi.cwiseMax(b.max);
  }
  return {lo, hi};
}

std::vector<Box> make_room(const std::string& name, const Vec3& lo, const Vec3& hi, double thickness,
                           bool textured_floor) {
  const double t = thickness;
  std::vector<Box> out;
  auto slab = [&](const std::string& suffix, Vec3 mn, Vec3 mx) {
    Box b;
    b.name = name + "/" + suffix;
    b.min = mn;
    b.max = mx;
    out.push_back(std::move(b));
  };
  slab("floor", {lo.x(), lo.y(), lo.z() - t}, {hi.x(), hi.y(), lo.z()});
  out.back().textured[static_cast<std::size_t>(FaceSide::PosZ)] = textured_floor;
  slab("ceiling", {lo.x(), lo.y(), hi.z()}, {hi.x(), hi.y(), hi.z() + t});
  slab("wall-x", {lo.x() - t, lo.y(), lo.z()}, {lo.x(), hi.y(), hi.z()});
  slab("wall+x", {hi.x(), lo.y(), lo.z()}, {hi.x() + t, hi.y(), hi.z()});
  slab("wall-y", {lo.x(), lo.y() - t, lo.z()}, {hi.x(), lo.y(), hi.z()});
  slab("wall+y", {lo.x(), hi.y(), lo.z()}, {hi.x(), hi.y() + t, hi.z()});
  return out;
}

std::vector<Box> make_wall_with_door(const std::string& name, const Vec3& lo, const Vec3& hi, int along_axis,
                                     double door_lo, double door_hi, double door_top) {
  if (along_axis != 0 && along_axis != 1) throw std::invalid_argument("door wall must run along x or y");
  if (!(door_lo > lo[along_axis] && door_hi < hi[along_axis] && door_lo < door_hi && door_top > lo.z()))
    throw std::invalid_argument("door opening must lie inside the wall");
  std::vector<Box> out;
  Box left;
  left.name = name + "/left";
  left.min = lo;
  left.max = hi;
  left.max[along_axis] = door_lo;
  Box right;
  right.name = name + "/right";
  right.min = lo;
  right.max = hi;
  right.min[along_axis] = door_hi;
  out.push_back(left);
  out.push_back(right);
  if (door_top < hi.z()) {
    Box lintel;
    lintel.name = name + "/lintel";
    lintel.min = lo;
    lintel.max = hi;
    lintel.min[along_axis] = door_lo;
    lintel.max[along_axis] = door_hi;
    lintel.min.z() = door_top;
    out.push_back(lintel);
  }
  return out;
}

void add_vertical_stripe(Box& box, int face_id, double along, double z0, double z1) {
  const int axis = face_id / 2;
  if (axis == 2) throw std::invalid_argument("vertical stripes need a vertical face");
  const double coord = (face_id % 2) ? box.max[axis] : box.min[axis];
  const int other = axis == 0 ? 1 : 0;
  Vec3 a;
  a[axis] = coord;
  a[other] = along;
  a.z() = z0;
  Vec3 b = a;
  b.z() = z1;
  box.extra_edges[static_cast<std::size_t>(face_id)].push_back({a, b});
}

}  // namespace sdexp
