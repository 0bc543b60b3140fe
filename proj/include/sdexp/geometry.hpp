#pragma once

#include <optional>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace sdexp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rigid transform world <- body. For keyframes the body is the camera
/// (x right, y down, z along the optical axis).
struct Pose {
  Vec3 position = Vec3::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  static Pose identity() { return {}; }

  Pose inverse() const;
  Pose compose(const Pose& rhs) const;  // this * rhs
  Vec3 apply(const Vec3& p) const { return orientation * p + position; }
  Mat3 rotation() const { return orientation.toRotationMatrix(); }
};

/// Forward-looking camera mounted level on the vehicle: optical axis points
/// along the heading in the horizontal plane, image y points to world -z.
Pose camera_pose_from_heading(const Vec3& position, double heading_rad);

/// Heading (yaw about world +z) of a camera pose's optical axis.
double heading_of(const Pose& camera_pose);

struct CameraIntrinsics {
  double fx = 537.0;
  double fy = 537.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;

  bool contains(double u, double v) const {
    return u >= 0.0 && v >= 0.0 && u < width && v < height;
  }
  /// Throws std::invalid_argument when fx/fy/cx/cy/size are inconsistent.
  void validate() const;
  double horizontal_fov() const;
};

struct PixelMeasurement {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;     // along the optical axis [m]
  double variance = 0.0;  // [m^2]
};

struct Projection {
  double u;
  double v;
  double depth;
};

/// Pixel (u, v) must lie in the closed image rectangle [0, width] x [0, height].
/// Throws std::invalid_argument otherwise or for non-positive depth.
Vec3 backproject(const CameraIntrinsics& intr, double u, double v, double depth);

Vec3 transform_point(const Pose& pose, const Vec3& p_cam);

/// Pinhole projection; nullopt for points at or behind the camera plane.
/// The returned pixel may lie outside the image.
std::optional<Projection> project(const CameraIntrinsics& intr, const Vec3& p_cam);

}  // namespace sdexp
