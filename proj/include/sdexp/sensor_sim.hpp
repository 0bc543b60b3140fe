#pragma once

#include <cstdint>
#include <vector>

#include "sdexp/geometry.hpp"
#include "sdexp/occupancy_map.hpp"
#include "sdexp/world.hpp"

namespace sdexp {

/// Semi-dense selection and noise model of the synthetic depth sensor.
struct RenderParams {
  double edge_pixel_radius = 3.0;  // [px]
  int pixel_stride = 4;
  double depth_noise_sigma0 = 0.01;  // sigma = sigma0 * depth
  double variance_coeff = 1.0;       // variance = (sigma0 * depth)^2 * coeff

  void validate() const;
};

/// Depth image sampled every `stride` pixels; NaN marks rays that escape.
struct DepthImage {
  int cols = 0;
  int rows = 0;
  int stride = 1;
  std::vector<double> depth;
  std::vector<int> face;  // hit face id, -1 for no hit

  double at(int col, int row) const { return depth[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(col)]; }
  double pixel_u(int col) const { return static_cast<double>(col * stride); }
  double pixel_v(int row) const { return static_cast<double>(row * stride); }
};

/// Ground-truth renderer: nearest ray-face intersection per sampled pixel.
DepthImage render_dense_depth(const WorldModel& world, const Pose& pose, const CameraIntrinsics& intr, int stride = 1);

/// Depth only at pixels whose surface hit projects within edge_pixel_radius of
/// an edge feature of the hit face, or anywhere on a textured face.
SemiDenseFrame render_semidense(const WorldModel& world, const Pose& pose, const CameraIntrinsics& intr,
                                const RenderParams& params, std::uint64_t seed);

/// 360 degree turn on the spot with a vertical sinusoid:
/// pose k sits at center + (0, 0, amp * sin(2 pi k / n)), heading 2 pi k / n.
std::vector<Pose> look_around_poses(const Vec3& center, int n_steps, double vertical_amp);

struct Waypoint {
  Vec3 position;
  double heading;  // camera heading [rad] held while flying towards this waypoint
};

struct FlightParams {
  double capture_spacing = 0.25;  // [m]
  double position_noise = 0.0;    // [m], per axis
  double heading_noise = 0.0;     // [rad]
  std::uint64_t seed = 0;
};

/// Camera poses captured along the straight segments between consecutive
/// waypoints, evenly spaced at most capture_spacing apart, endpoints
/// included. A segment flies with the heading of its destination waypoint.
std::vector<Pose> execute_waypoints(const std::vector<Waypoint>& waypoints, const FlightParams& params);

}  // namespace sdexp
