#include <doctest.h>

#include "sdexp/traversability.hpp"
#include "support.hpp"

using namespace sdexp;

namespace {

GridGeometry grid(const VoxelIndex& dims) {
  GridGeometry g;
  g.resolution = 0.1;
  g.dims = dims;
  return g;
}

// Blocked iff some non-Free or out-of-bounds voxel lies in the window.
bool blocked_oracle(const StateGrid& s, const VoxelIndex& v, int hor, int ver) {
  for (int dz = -ver; dz <= ver; ++dz)
    for (int dy = -hor; dy <= hor; ++dy)
      for (int dx = -hor; dx <= hor; ++dx) {
        const VoxelIndex w = v + VoxelIndex(dx, dy, dz);
        if (!s.geometry.contains(w) || s.at(w) != VoxelState::Free) return true;
      }
  return false;
}

}  // namespace

TEST_CASE("inflation matches a brute-force window search") {
  Rng rng(31);
  for (int n = 0; n < 20; ++n) {
    const GridGeometry g = grid({int(5 + rng.below(12)), int(5 + rng.below(12)), int(3 + rng.below(8))});
    const StateGrid s = test::random_states(rng, g, 0.97);
    const int hor = int(rng.below(4)), ver = int(rng.below(3));
    const TraversabilityGrid t = inflate(s, hor, ver);
    CHECK(t.hor() == hor);
    CHECK(t.ver() == ver);
    for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(t.traversable(i) == !blocked_oracle(s, g.unravel(i), hor, ver));
  }
}

TEST_CASE("single occupied voxel blocks a 7x7x3 box") {
  const GridGeometry g = grid({21, 21, 11});
  StateGrid s{g, std::vector<VoxelState>(g.size(), VoxelState::Free)};
  const VoxelIndex c(10, 10, 5);
  s.states[g.linear(c)] = VoxelState::Occupied;
  const TraversabilityGrid t = inflate(s, 3, 1);
  for (int dz = -4; dz <= 4; ++dz)
    for (int dy = -5; dy <= 5; ++dy)
      for (int dx = -5; dx <= 5; ++dx) {
        const VoxelIndex v = c + VoxelIndex(dx, dy, dz);
        const bool inside = std::abs(dx) <= 3 && std::abs(dy) <= 3 && std::abs(dz) <= 1;
        const bool rim = v.x() < 3 || v.y() < 3 || v.z() < 1 || v.x() > 17 || v.y() > 17 || v.z() > 9;
        CHECK(t.traversable(v) == (!inside && !rim));
      }
}

TEST_CASE("zero radii give exactly the Free set and a free map keeps only the rim blocked") {
  Rng rng(32);
  const GridGeometry g = grid({9, 8, 7});
  const StateGrid s = test::random_states(rng, g, 0.6);
  const TraversabilityGrid t = inflate(s, 0, 0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(t.traversable(i) == (s.states[i] == VoxelState::Free));

  const StateGrid free{g, std::vector<VoxelState>(g.size(), VoxelState::Free)};
  const TraversabilityGrid f = inflate(free, 2, 1);
  CHECK(f.count_traversable() == std::size_t((9 - 4) * (8 - 4) * (7 - 2)));
  CHECK_THROWS_AS(inflate(free, -1, 0), std::invalid_argument);
}

TEST_CASE("inflation is monotone in the radii") {
  Rng rng(33);
  const GridGeometry g = grid({16, 14, 10});
  const StateGrid s = test::random_states(rng, g, 0.98);
  for (int hor = 0; hor < 3; ++hor)
    for (int ver = 0; ver < 2; ++ver) {
      const auto small = inflate(s, hor, ver);
      const auto big = inflate(s, hor + 1, ver + 1);
      for (std::size_t i = 0; i < g.size(); ++i)
        if (big.traversable(i)) REQUIRE(small.traversable(i));
    }
}

TEST_CASE("segment traversability follows the voxel traversal") {
  const GridGeometry g = grid({20, 20, 5});
  StateGrid s{g, std::vector<VoxelState>(g.size(), VoxelState::Free)};
  s.states[g.linear({10, 10, 2})] = VoxelState::Occupied;
  const auto t = inflate(s, 1, 0);
  CHECK(t.segment_traversable({0.25, 0.25, 0.25}, {1.75, 0.25, 0.25}));
  CHECK_FALSE(t.segment_traversable({0.25, 1.05, 0.25}, {1.75, 1.05, 0.25}));
  CHECK_FALSE(t.segment_traversable({0.25, 0.25, 0.25}, {5.0, 0.25, 0.25}));  // leaves the grid
}
