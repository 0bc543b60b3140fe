#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sdexp/geometry.hpp"

namespace sdexp {

/// Face ids of an axis-aligned box: 2*axis + (0 for the min side, 1 for max).
enum class FaceSide : int { NegX = 0, PosX, NegY, PosY, NegZ, PosZ };

const char* face_name(int face_id);
/// Accepts "-x", "+x", ..., "+z"; throws std::invalid_argument otherwise.
int parse_face_name(const std::string& name);

struct EdgeSegment {
  Vec3 a;
  Vec3 b;
};

/// Axis-aligned box. Its faces are the scene surfaces; `solid` boxes also
/// occupy their interior (a room shell built from slabs is made of solid
/// slabs).
struct Box {
  std::string name;
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Ones();
  bool solid = true;
  std::array<bool, 6> textured{};
  std::array<std::vector<EdgeSegment>, 6> extra_edges;  // borders are implicit
};

/// One rectangle of a box, with all of its edge features (borders + extras).
struct Face {
  int box = 0;
  int face_id = 0;
  int axis = 0;
  double coord = 0.0;
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  bool textured = false;
  std::vector<EdgeSegment> edges;
};

struct RayHit {
  double t;  // along the (not necessarily unit) direction
  int face;
};

class WorldModel {
 public:
  WorldModel() = default;
  explicit WorldModel(std::vector<Box> boxes);

  const std::vector<Box>& boxes() const { return boxes_; }
  const std::vector<Face>& faces() const { return faces_; }

  /// Nearest face hit with t > t_min.
  std::optional<RayHit> intersect(const Vec3& origin, const Vec3& dir, double t_min = 1e-9) const;

  bool inside_solid(const Vec3& p) const;
  std::pair<Vec3, Vec3> bounds() const;

 private:
  std::vector<Box> boxes_;
  std::vector<Face> faces_;
};

/// Slab-built room enclosing the interior [lo, hi]: floor, ceiling, four
/// walls of the given thickness, abutting along the interior edges so the
/// room corners are face borders.
std::vector<Box> make_room(const std::string& name, const Vec3& lo, const Vec3& hi, double thickness,
                           bool textured_floor = false);

/// Wall slab spanning [lo, hi] with a rectangular opening from `door_lo` to
/// `door_hi` along `along_axis` and up to `door_top` in z. Returns up to 3
/// slabs (left, right, lintel).
std::vector<Box> make_wall_with_door(const std::string& name, const Vec3& lo, const Vec3& hi, int along_axis,
                                     double door_lo, double door_hi, double door_top);

/// Adds a vertical stripe (segment from z0 to z1) at `along` on the box face.
void add_vertical_stripe(Box& box, int face_id, double along, double z0, double z1);

}  // namespace sdexp
