#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sdexp/geometry.hpp"
#include "sdexp/random.hpp"

namespace sdexp {

/// Motion direction analysis for a set of measured points p_i (camera at the
/// origin). Translating the camera by a unit step x sweeps, in front of each
/// point, a triangle of area |p_i x x| / 2; the summed squared area is the
/// quadratic form S(x) = 1/2 x^T M x with M = sum_i hat(p_i)^T hat(p_i).
/// S is maximized over unit x by the eigenvector of M's largest eigenvalue.
struct DirectionAnalysis {
  Mat3 m = Mat3::Zero();
  Vec3 eigenvalues = Vec3::Zero();   // descending
  Mat3 eigenvectors = Mat3::Zero();  // column i pairs with eigenvalues[i]
};

struct DegenerateInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// S(x) = 1/2 sum |p_i x x|^2. Throws std::invalid_argument unless |x| = 1
/// within 1e-9.
double observed_area_sq(std::span<const Vec3> points, const Vec3& x);

/// M = sum_i hat(p_i)^T hat(p_i) = sum_i (|p_i|^2 I - p_i p_i^T).
Mat3 build_motion_matrix(std::span<const Vec3> points);

/// Skew-symmetric cross-product matrix: hat(p) * x = p.cross(x).
Mat3 hat(const Vec3& p);

struct OptimalDirection {
  Vec3 direction;
  DirectionAnalysis analysis;
};

/// Eigenvector of the largest eigenvalue, sign-normalized (largest-magnitude
/// component positive). When the top two eigenvalues coincide any unit vector
/// of their eigen-plane is equally optimal; the returned one is a
/// deterministic member of that plane. Throws DegenerateInputError when all
/// points are zero.
OptimalDirection optimal_direction(std::span<const Vec3> points);

DirectionAnalysis analyze_directions(std::span<const Vec3> points);

/// Draws u ~ U[0, width), v ~ U[0, height), d ~ U[depth_min, depth_max) and
/// backprojects.
std::vector<Vec3> sample_frustum_points(const CameraIntrinsics& intr, std::size_t n, double depth_min,
                                        double depth_max, Rng& rng);

struct EigenSlotStats {
  double value_mean = 0.0;
  double value_std = 0.0;
  Vec3 vector_mean = Vec3::Zero();
  Vec3 vector_std = Vec3::Zero();
};

/// Mean and population standard deviation per eigen slot over all trials.
struct McSummary {
  std::array<EigenSlotStats, 3> slots;
  std::size_t trials = 0;
  std::size_t n_points = 0;

  bool operator==(const McSummary& o) const;
};

struct McConfig {
  CameraIntrinsics intrinsics;
  std::size_t n_points = 600;
  double depth_min = 0.5;
  double depth_max = 5.0;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
};

/// Trial t draws from Rng(derive_seed(seed, t)), so trials are independent
/// of evaluation order.
McSummary monte_carlo_summary(const McConfig& config);

}  // namespace sdexp
