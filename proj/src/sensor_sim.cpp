#include "sdexp/sensor_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sdexp/random.hpp"

namespace sdexp {

void RenderParams::validate() const {
  if (!(edge_pixel_radius >= 0.0)) throw std::invalid_argument("render: edge_pixel_radius must be >= 0");
  if (pixel_stride < 1) throw std::invalid_argument("render: pixel_stride must be >= 1");
  if (!(depth_noise_sigma0 >= 0.0) || !(variance_coeff >= 0.0))
    throw std::invalid_argument("render: noise parameters must be >= 0");
}

DepthImage render_dense_depth(const WorldModel& world, const Pose& pose, const CameraIntrinsics& intr, int stride) {
  if (stride < 1) throw std::invalid_argument("render: stride must be >= 1");
  DepthImage img;
  img.stride = stride;
  img.cols = (intr.width + stride - 1) / stride;
  img.rows = (intr.height + stride - 1) / stride;
  img.depth.assign(static_cast<std::size_t>(img.cols) * static_cast<std::size_t>(img.rows),
                   std::numeric_limits<double>::quiet_NaN());
  img.face.assign(img.depth.size(), -1);
  const Mat3 r = pose.rotation();
  for (int row = 0; row < img.rows; ++row) {
    for (int col = 0; col < img.cols; ++col) {
      const Vec3 ray_cam = backproject(intr, img.pixel_u(col), img.pixel_v(row), 1.0);
      const auto hit = world.intersect(pose.position, r * ray_cam);
      if (!hit) continue;
      const std::size_t i = static_cast<std::size_t>(row) * static_cast<std::size_t>(img.cols) + static_cast<std::size_t>(col);
      img.depth[i] = hit->t;  // unit z in the camera frame, so t is the depth
      img.face[i] = hit->face;
    }
  }
  return img;
}

namespace {

struct Segment2 {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
};

double distance_to_segment(const Eigen::Vector2d& p, const Segment2& s) {
  const Eigen::Vector2d d = s.b - s.a;
  const double len2 = d.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (s.a + t * d - p).norm();
}

// Clip the camera-frame segment to z >= near and project it.
std::optional<Segment2> project_segment(const CameraIntrinsics& intr, Vec3 a, Vec3 b) {
  constexpr double kNear = 1e-3;
  if (a.z() < kNear && b.z() < kNear) return std::nullopt;
  if (a.z() < kNear) a = a + (kNear - a.z()) / (b.z() - a.z()) * (b - a);
  if (b.z() < kNear) b = b + (kNear - b.z()) / (a.z() - b.z()) * (a - b);
  const auto pa = project(intr, a);
  const auto pb = project(intr, b);
  if (!pa || !pb) return std::nullopt;
  return Segment2{{pa->u, pa->v}, {pb->u, pb->v}};
}

}  // namespace

SemiDenseFrame render_semidense(const WorldModel& world, const Pose& pose, const CameraIntrinsics& intr,
                                const RenderParams& params, std::uint64_t seed) {
  params.validate();
  SemiDenseFrame frame;
  frame.pose = pose;
  frame.intrinsics = intr;

  const DepthImage dense = render_dense_depth(world, pose, intr, params.pixel_stride);
  const Pose cam_from_world = pose.inverse();

  // projected edge features, per face, computed on first use
  std::vector<std::vector<Segment2>> projected(world.faces().size());
  std::vector<char> ready(world.faces().size(), 0);
  auto edges_of = [&](int face) -> const std::vector<Segment2>& {
    const auto fi = static_cast<std::size_t>(face);
    if (!ready[fi]) {
      for (const EdgeSegment& e : world.faces()[fi].edges)
        if (auto s = project_segment(intr, cam_from_world.apply(e.a), cam_from_world.apply(e.b))) projected[fi].push_back(*s);
      ready[fi] = 1;
    }
    return projected[fi];
  };

  Rng rng(seed);
  for (int row = 0; row < dense.rows; ++row) {
    for (int col = 0; col < dense.cols; ++col) {
      const std::size_t i = static_cast<std::size_t>(row) * static_cast<std::size_t>(dense.cols) + static_cast<std::size_t>(col);
      const int face = dense.face[i];
      if (face < 0) continue;
      const Eigen::Vector2d px(dense.pixel_u(col), dense.pixel_v(row));
      bool measured = world.faces()[static_cast<std::size_t>(face)].textured;
      if (!measured) {
        for (const Segment2& s : edges_of(face)) {
          if (distance_to_segment(px, s) <= params.edge_pixel_radius) {
            measured = true;
            break;
          }
        }
      }
      if (!measured) continue;
      const double d = dense.depth[i];
      const double sigma = params.depth_noise_sigma0 * d;
      double noisy = d;
      if (sigma > 0.0) noisy = d + rng.normal(0.0, sigma);
      if (!(noisy > 0.0)) continue;
      frame.measurements.push_back({px.x(), px.y(), noisy, sigma * sigma * params.variance_coeff});
    }
  }
  return frame;
}

std::vector<Pose> look_around_poses(const Vec3& center, int n_steps, double vertical_amp) {
  if (n_steps < 4) throw std::invalid_argument("look_around_poses: need at least 4 steps");
  std::vector<Pose> poses;
  poses.reserve(static_cast<std::size_t>(n_steps));
  for (int k = 0; k < n_steps; ++k) {
    const double phase = 2.0 * std::numbers::pi * k / n_steps;
    poses.push_back(camera_pose_from_heading(center + Vec3(0.0, 0.0, vertical_amp * std::sin(phase)), phase));
  }
  return poses;
}

std::vector<Pose> execute_waypoints(const std::vector<Waypoint>& waypoints, const FlightParams& params) {
  if (!(params.capture_spacing > 0.0)) throw std::invalid_argument("execute_waypoints: capture spacing must be positive");
  std::vector<Waypoint> samples;
  if (waypoints.size() == 1) samples.push_back(waypoints.front());
  for (std::size_t s = 0; s + 1 < waypoints.size(); ++s) {
    const Vec3 a = waypoints[s].position;
    const Vec3 b = waypoints[s + 1].position;
    const double heading = waypoints[s + 1].heading;
    const double len = (b - a).norm();
    const int n = std::max(1, static_cast<int>(std::ceil(len / params.capture_spacing - 1e-9)));
    for (int k = 0; k <= n; ++k) {
      const Vec3 p = k == n ? b : Vec3(a + (b - a) * (static_cast<double>(k) / n));
      if (!samples.empty() && samples.back().position == p && samples.back().heading == heading) continue;
      samples.push_back({p, heading});
      if (len == 0.0) break;
    }
  }

  Rng rng(params.seed);
  std::vector<Pose> poses;
  poses.reserve(samples.size());
  for (const Waypoint& w : samples) {
    Vec3 p = w.position;
    double h = w.heading;
    if (params.position_noise > 0.0)
      p += Vec3(rng.normal(0.0, params.position_noise), rng.normal(0.0, params.position_noise),
                rng.normal(0.0, params.position_noise));
    if (params.heading_noise > 0.0) h += rng.normal(0.0, params.heading_noise);
    poses.push_back(camera_pose_from_heading(p, h));
  }
  return poses;
}

}  // namespace sdexp
