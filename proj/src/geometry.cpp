#include "sdexp/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sdexp {

Pose Pose::inverse() const {
  Pose inv;
  inv.orientation = orientation.conjugate();
  inv.position = -(inv.orientation * position);
  return inv;
}

Pose Pose::compose(const Pose& rhs) const {
  Pose out;
  out.orientation = (orientation * rhs.orientation).normalized();
  out.position = orientation * rhs.position + position;
  return out;
}

Pose camera_pose_from_heading(const Vec3& position, double heading_rad) {
  const double c = std::cos(heading_rad);
  const double s = std::sin(heading_rad);
  Mat3 r;
  // columns: camera x (right), y (down), z (optical axis) in world frame
  r.col(0) = Vec3(s, -c, 0.0);
  r.col(1) = Vec3(0.0, 0.0, -1.0);
  r.col(2) = Vec3(c, s, 0.0);
  Pose pose;
  pose.position = position;
  pose.orientation = Eigen::Quaterniond(r).normalized();
  return pose;
}

double heading_of(const Pose& camera_pose) {
  const Vec3 axis = camera_pose.orientation * Vec3::UnitZ();
  return std::atan2(axis.y(), axis.x());
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw std::invalid_argument("intrinsics: focal lengths must be positive");
  if (width <= 0 || height <= 0) throw std::invalid_argument("intrinsics: image size must be positive");
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
    throw std::invalid_argument("intrinsics: principal point outside the image");
}

double CameraIntrinsics::horizontal_fov() const {
  return std::atan2(cx, fx) + std::atan2(width - cx, fx);
}

Vec3 backproject(const CameraIntrinsics& intr, double u, double v, double depth) {
  // closed rectangle: the far image border is still on the sensor
  if (!(u >= 0.0 && v >= 0.0 && u <= intr.width && v <= intr.height))
    throw std::invalid_argument("backproject: pixel (" + std::to_string(u) + ", " + std::to_string(v) +
                                ") outside the image");
  if (!(depth > 0.0)) throw std::invalid_argument("backproject: depth must be positive");
  return {depth * (u - intr.cx) / intr.fx, depth * (v - intr.cy) / intr.fy, depth};
}

Vec3 transform_point(const Pose& pose, const Vec3& p_cam) { return pose.apply(p_cam); }

std::optional<Projection> project(const CameraIntrinsics& intr, const Vec3& p_cam) {
  if (!(p_cam.z() > 0.0)) return std::nullopt;
  return Projection{intr.fx * p_cam.x() / p_cam.z() + intr.cx, intr.fy * p_cam.y() / p_cam.z() + intr.cy,
                    p_cam.z()};
}

}  // namespace sdexp
