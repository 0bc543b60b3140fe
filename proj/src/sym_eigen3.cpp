#include "sdexp/sym_eigen3.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace sdexp {

Vec3 canonical_sign(const Vec3& v) {
  int arg = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  return v[arg] < 0.0 ? Vec3(-v) : v;
}

namespace {

SymEigen3 sorted(const Vec3& values, const Mat3& vectors) {
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] > values[b]; });
  SymEigen3 out;
  for (int i = 0; i < 3; ++i) {
    out.values[i] = values[order[static_cast<std::size_t>(i)]];
    out.vectors.col(i) = canonical_sign(vectors.col(order[static_cast<std::size_t>(i)]).normalized());
  }
  return out;
}

// Null vector of the (rank-2) matrix a - lambda*I from the best-conditioned
// cross product of its rows.
Vec3 null_vector(const Mat3& a, double lambda) {
  const Mat3 b = a - lambda * Mat3::Identity();
  const Vec3 r0 = b.row(0), r1 = b.row(1), r2 = b.row(2);
  const std::array<Vec3, 3> c{r0.cross(r1), r0.cross(r2), r1.cross(r2)};
  std::size_t best = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (c[i].squaredNorm() > c[best].squaredNorm()) best = i;
  return c[best].normalized();
}

}  // namespace

SymEigen3 sym_eigen3_jacobi(const Mat3& a_in) {
  Mat3 a = 0.5 * (a_in + a_in.transpose());
  Mat3 v = Mat3::Identity();
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (off <= 1e-300 || off <= 1e-32 * a.squaredNorm()) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        Mat3 j = Mat3::Identity();
        j(p, p) = c;
        j(q, q) = c;
        j(p, q) = s;
        j(q, p) = -s;
        a = j.transpose() * a * j;
        a(p, q) = a(q, p) = 0.0;
        v = v * j;
      }
    }
  }
  return sorted(a.diagonal(), v);
}

SymEigen3 sym_eigen3(const Mat3& a_in) {
  const Mat3 a = 0.5 * (a_in + a_in.transpose());
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  if (p1 == 0.0) return sorted(a.diagonal(), Mat3::Identity());

  const double q = a.trace() / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) + (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Mat3 b = (a - q * Mat3::Identity()) / p;
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;

  Vec3 values;
  values[0] = q + 2.0 * p * std::cos(phi);
  values[2] = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  values[1] = 3.0 * q - values[0] - values[2];

  const double scale = std::max({std::abs(values[0]), std::abs(values[1]), std::abs(values[2])});
  const double gap = std::min(values[0] - values[1], values[1] - values[2]);
  if (scale == 0.0 || gap < 1e-6 * scale) return sym_eigen3_jacobi(a);

  Mat3 vectors;
  vectors.col(0) = null_vector(a, values[0]);
  vectors.col(2) = null_vector(a, values[2]);
  // re-orthogonalize the extreme pair, then complete the basis
  vectors.col(2) = (vectors.col(2) - vectors.col(2).dot(vectors.col(0)) * vectors.col(0)).normalized();
  vectors.col(1) = vectors.col(2).cross(vectors.col(0)).normalized();
  return sorted(values, vectors);
}

}  // namespace sdexp
