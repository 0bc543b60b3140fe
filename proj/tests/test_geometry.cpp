#include <doctest.h>

#include <numbers>

#include "sdexp/geometry.hpp"
#include "sdexp/random.hpp"
#include "support.hpp"

using namespace sdexp;

namespace {

CameraIntrinsics wide() {
  CameraIntrinsics c;
  c.fx = c.fy = 320.0;
  return c;
}

bool near(const Vec3& a, const Vec3& b, double tol = 1e-12) { return (a - b).norm() <= tol; }

}  // namespace

TEST_CASE("backproject examples") {
  const auto c = wide();
  CHECK(near(backproject(c, 320, 240, 2), Vec3(0, 0, 2)));
  CHECK(near(backproject(c, 640, 240, 1), Vec3(1, 0, 1)));
  const Vec3 p = backproject(c, 0, 0, 2);
  CHECK(near(p, Vec3(-2, -1.5, 2)));
  const auto q = project(c, p);
  REQUIRE(q);
  CHECK(q->u == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q->v == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(backproject(c, 100.5, 17.25, 3.7).z() == 3.7);
}

TEST_CASE("backproject rejects bad input") {
  const auto c = wide();
  CHECK_THROWS_AS(backproject(c, -1, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(backproject(c, 10, 481, 1), std::invalid_argument);
  CHECK_THROWS_AS(backproject(c, 10, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(backproject(c, 10, 10, -2), std::invalid_argument);
}

TEST_CASE("project examples and behind-camera marker") {
  const auto c = wide();
  auto a = project(c, {0, 0, 2});
  REQUIRE(a);
  CHECK(a->u == 320.0);
  CHECK(a->v == 240.0);
  CHECK(a->depth == 2.0);
  auto b = project(c, {1, 0, 1});
  REQUIRE(b);
  CHECK(b->u == 640.0);
  CHECK(b->v == 240.0);
  CHECK_FALSE(project(c, {1, 1, 0}));
  CHECK_FALSE(project(c, {1, 1, -3}));
}

TEST_CASE("project/backproject round trip on random frustum points") {
  Rng rng(11);
  const CameraIntrinsics c;
  for (int n = 0; n < 1000; ++n) {
    const double u = rng.uniform(0, c.width), v = rng.uniform(0, c.height), d = rng.uniform(0.1, 20);
    const auto q = project(c, backproject(c, u, v, d));
    REQUIRE(q);
    CHECK(std::abs(q->u - u) < 1e-9);
    CHECK(std::abs(q->v - v) < 1e-9);
    CHECK(std::abs(q->depth - d) < 1e-9);
  }
}

TEST_CASE("transform_point examples") {
  CHECK(near(transform_point(Pose::identity(), {1, 2, 3}), Vec3(1, 2, 3)));
  Pose t;
  t.position = {0, 0, 5};
  CHECK(near(transform_point(t, {1, 0, 0}), Vec3(1, 0, 5)));
  Pose yaw;
  yaw.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(std::numbers::pi / 2, Vec3::UnitZ()));
  // quaternion sandwich q p q* as the oracle
  const Eigen::Quaterniond p(0, 1, 0, 0);
  const Eigen::Quaterniond r = yaw.orientation * p * yaw.orientation.conjugate();
  CHECK(near(transform_point(yaw, {1, 0, 0}), r.vec(), 1e-15));
  CHECK(near(transform_point(yaw, {1, 0, 0}), Vec3(0, 1, 0), 1e-15));
}

TEST_CASE("pose inverse, composition and distance preservation") {
  Rng rng(5);
  for (int n = 0; n < 200; ++n) {
    Pose a;
    a.position = test::random_point(rng, Vec3::Constant(-10), Vec3::Constant(10));
    a.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(rng.uniform(-3, 3), test::random_unit(rng)));
    CHECK(std::abs(a.orientation.norm() - 1.0) < 1e-9);
    const Pose id = a.compose(a.inverse());
    CHECK(id.position.norm() < 1e-9);
    CHECK(std::abs(std::abs(id.orientation.w()) - 1.0) < 1e-9);
    const Vec3 p = test::random_point(rng, Vec3::Constant(-5), Vec3::Constant(5));
    const Vec3 q = test::random_point(rng, Vec3::Constant(-5), Vec3::Constant(5));
    CHECK(std::abs((transform_point(a, p) - transform_point(a, q)).norm() - (p - q).norm()) < 1e-9);
    CHECK(near(a.inverse().apply(a.apply(p)), p, 1e-9));
  }
}

TEST_CASE("camera pose from heading looks along the heading") {
  for (double h : {0.0, 0.7, std::numbers::pi / 2, -2.5}) {
    const Pose p = camera_pose_from_heading({1, 2, 3}, h);
    const Vec3 fwd = p.rotation() * Vec3::UnitZ();
    CHECK(near(fwd, Vec3(std::cos(h), std::sin(h), 0), 1e-12));
    CHECK(near(p.rotation() * Vec3::UnitY(), Vec3(0, 0, -1), 1e-12));
    CHECK(std::remainder(heading_of(p) - h, 2 * std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.rotation().determinant() == doctest::Approx(1.0));
  }
}

TEST_CASE("intrinsics validation and field of view") {
  CameraIntrinsics c = wide();
  CHECK_NOTHROW(c.validate());
  CHECK(c.horizontal_fov() == doctest::Approx(std::numbers::pi / 2));
  c.fx = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = wide();
  c.cx = 640;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("rng streams are reproducible and independent") {
  Rng a(derive_seed(3, 0)), b(derive_seed(3, 0)), c(derive_seed(3, 1));
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  CHECK(Rng(derive_seed(3, 0)).next() != c.next());
  Rng u(1);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = u.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
  for (int i = 0; i < 1000; ++i) CHECK(u.below(7) < 7);
}
