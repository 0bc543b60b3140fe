#include "sdexp/motion_optimality.hpp"

#include <cmath>

#include "sdexp/sym_eigen3.hpp"

namespace sdexp {

Mat3 hat(const Vec3& p) {
  Mat3 h;
  h << 0.0, -p.z(), p.y(),  //
      p.z(), 0.0, -p.x(),   //
      -p.y(), p.x(), 0.0;
  return h;
}

double observed_area_sq(std::span<const Vec3> points, const Vec3& x) {
  if (std::abs(x.norm() - 1.0) > 1e-9) throw std::invalid_argument("observed_area_sq: direction must be a unit vector");
  double sum = 0.0;
  for (const Vec3& p : points) sum += p.cross(x).squaredNorm();
  return 0.5 * sum;
}

Mat3 build_motion_matrix(std::span<const Vec3> points) {
  Mat3 m = Mat3::Zero();
  for (const Vec3& p : points) {
    m.diagonal().array() += p.squaredNorm();
    m.noalias() -= p * p.transpose();
  }
  return m;
}

DirectionAnalysis analyze_directions(std::span<const Vec3> points) {
  DirectionAnalysis a;
  a.m = build_motion_matrix(points);
  const SymEigen3 eig = sym_eigen3(a.m);
  a.eigenvalues = eig.values.cwiseMax(0.0);  // PSD up to rounding
  a.eigenvectors = eig.vectors;
  return a;
}

OptimalDirection optimal_direction(std::span<const Vec3> points) {
  bool any = false;
  for (const Vec3& p : points) any = any || p.squaredNorm() > 0.0;
  if (!any) throw DegenerateInputError("optimal_direction: all points are zero, direction undefined");
  OptimalDirection out;
  out.analysis = analyze_directions(points);
  out.direction = out.analysis.eigenvectors.col(0);
  return out;
}

std::vector<Vec3> sample_frustum_points(const CameraIntrinsics& intr, std::size_t n, double depth_min,
                                        double depth_max, Rng& rng) {
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform(0.0, intr.width);
    const double v = rng.uniform(0.0, intr.height);
    const double d = rng.uniform(depth_min, depth_max);
    pts.push_back(backproject(intr, u, v, d));
  }
  return pts;
}

bool McSummary::operator==(const McSummary& o) const {
  if (trials != o.trials || n_points != o.n_points) return false;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& a = slots[i];
    const auto& b = o.slots[i];
    if (a.value_mean != b.value_mean || a.value_std != b.value_std || a.vector_mean != b.vector_mean ||
        a.vector_std != b.vector_std)
      return false;
  }
  return true;
}

McSummary monte_carlo_summary(const McConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("monte_carlo_summary: trials must be >= 1");
  if (config.n_points < 3) throw std::invalid_argument("monte_carlo_summary: need at least 3 points");
  if (!(config.depth_min > 0.0 && config.depth_max > config.depth_min))
    throw std::invalid_argument("monte_carlo_summary: invalid depth range");
  config.intrinsics.validate();

  std::vector<DirectionAnalysis> runs(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) {
    Rng rng(derive_seed(config.seed, t));
    const auto pts = sample_frustum_points(config.intrinsics, config.n_points, config.depth_min, config.depth_max, rng);
    runs[t] = analyze_directions(pts);
  }

  McSummary s;
  s.trials = config.trials;
  s.n_points = config.n_points;
  const double n = static_cast<double>(config.trials);
  for (std::size_t k = 0; k < 3; ++k) {
    auto& slot = s.slots[k];
    for (const auto& r : runs) {
      slot.value_mean += r.eigenvalues[static_cast<int>(k)];
      slot.vector_mean += r.eigenvectors.col(static_cast<int>(k));
    }
    slot.value_mean /= n;
    slot.vector_mean /= n;
    Vec3 var_vec = Vec3::Zero();
    double var = 0.0;
    for (const auto& r : runs) {
      const double dv = r.eigenvalues[static_cast<int>(k)] - slot.value_mean;
      var += dv * dv;
      var_vec += (r.eigenvectors.col(static_cast<int>(k)) - slot.vector_mean).cwiseAbs2();
    }
    slot.value_std = std::sqrt(var / n);
    slot.vector_std = (var_vec / n).cwiseSqrt();
  }
  return s;
}

}  // namespace sdexp
