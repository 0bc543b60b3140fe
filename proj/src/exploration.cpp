#include "sdexp/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

#include "sdexp/random.hpp"

namespace sdexp {

namespace {

// Distance from `start` along `dir` (unit, horizontal) to the entry of the
// first non-traversable voxel.
double free_reach(const TraversabilityGrid& trav, const Vec3& start, const Vec3& dir) {
  const GridGeometry& g = trav.geometry();
  const double span = (g.max_corner() - g.origin).norm() + g.resolution;
  double reach = span;
  traverse_voxels(g, start, start + span * dir, [&](const VoxelIndex& v, double t_enter) {
    if (trav.traversable(v)) return true;
    reach = t_enter * span;
    return false;
  });
  return reach;
}

}  // namespace

StarPlan plan_star_discovery(const TraversabilityGrid& trav, const Vec3& origin, const StarParams& params) {
  if (params.n_rays < 1) throw std::invalid_argument("star discovery: n_rays must be >= 1");
  if (params.heights.empty()) throw std::invalid_argument("star discovery: no candidate heights");
  const GridGeometry& g = trav.geometry();

  std::optional<StarPlan> best;
  double best_sum = -1.0;
  for (double h : params.heights) {
    const Vec3 center(origin.x(), origin.y(), h);
    if (!trav.traversable_point(center)) continue;
    StarPlan plan;
    plan.origin = center;
    plan.height_index = g.voxel_of(center).z();
    double sum = 0.0;
    for (int k = 0; k < params.n_rays; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / params.n_rays;
      const Vec3 dir(std::cos(angle), std::sin(angle), 0.0);
      const double reach = free_reach(trav, center, dir) - params.margin;
      if (reach < g.resolution) continue;
      plan.legs.push_back({angle, reach, center + reach * dir});
      sum += reach;
    }
    if (sum > best_sum) {
      best_sum = sum;
      best = std::move(plan);
    }
  }
  if (!best) throw NoPlanError("star discovery: origin blocked at every candidate height");

  for (const StarLeg& leg : best->legs) {
    const double heading = leg.angle + std::numbers::pi / 2.0;
    best->waypoints.push_back({leg.endpoint, heading});
    best->waypoints.push_back({best->origin, heading});
  }
  best->total_length = 2.0 * best_sum;
  return *best;
}

std::vector<std::uint8_t> mark_visited(const StateGrid& states, std::span<const Vec3> origins) {
  const GridGeometry& g = states.geometry;
  std::vector<std::uint8_t> visited(g.size(), 0);
  for (const Vec3& o : origins) {
    const VoxelIndex ov = g.voxel_of(o);
    if (!g.contains(ov)) throw std::invalid_argument("mark_visited: origin outside the map");
    const Vec3 oc = g.center(ov);
    for (std::size_t lin = 0; lin < visited.size(); ++lin) {
      if (visited[lin] || states.states[lin] != VoxelState::Free) continue;
      if (line_of_sight(states, oc, g.center(g.unravel(lin)))) visited[lin] = 1;
    }
  }
  return visited;
}

std::vector<std::size_t> interesting_voxels(const TraversabilityGrid& trav, std::span<const std::uint8_t> visited) {
  if (visited.size() != trav.geometry().size()) throw std::invalid_argument("interesting_voxels: grid size mismatch");
  std::vector<std::size_t> out;
  for (std::size_t lin = 0; lin < visited.size(); ++lin)
    if (trav.traversable(lin) && !visited[lin]) out.push_back(lin);
  return out;
}

std::vector<Component> connected_components(const GridGeometry& g, std::span<const std::size_t> voxels) {
  // 0: not in set, 1: unassigned member, 2: assigned
  std::vector<std::uint8_t> member(g.size(), 0);
  for (std::size_t lin : voxels) member.at(lin) = 1;

  std::vector<std::size_t> sorted(voxels.begin(), voxels.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<Component> out;
  std::vector<std::size_t> stack;
  for (std::size_t seed : sorted) {
    if (member[seed] != 1) continue;
    Component comp;
    member[seed] = 2;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      comp.push_back(cur);
      const VoxelIndex v = g.unravel(cur);
      for (int axis = 0; axis < 3; ++axis) {
        for (int s : {-1, 1}) {
          VoxelIndex n = v;
          n[axis] += s;
          if (!g.contains(n)) continue;
          const std::size_t nl = g.linear(n);
          if (member[nl] != 1) continue;
          member[nl] = 2;
          stack.push_back(nl);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  std::stable_sort(out.begin(), out.end(), [](const Component& a, const Component& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

OriginChoice select_next_origin(const TraversabilityGrid& trav, std::span<const Component> components,
                                const SelectionParams& params) {
  if (components.empty() || components.front().empty()) throw NoPlanError("select_next_origin: no component");
  const GridGeometry& g = trav.geometry();
  std::vector<std::size_t> pool = components.front();
  const std::size_t n = std::min(params.n_candidates, pool.size());

  Rng rng(params.seed);
  for (std::size_t i = 0; i < n; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);

  std::optional<OriginChoice> best;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t voxel = pool[i];
    const Vec3 c = g.center(g.unravel(voxel));
    StarParams star = params.star;
    if (params.include_candidate_height) star.heights.push_back(c.z());
    StarPlan plan;
    try {
      plan = plan_star_discovery(trav, c, star);
    } catch (const NoPlanError&) {
      continue;
    }
    if (plan.legs.empty()) continue;
    const bool better = !best || plan.total_length > best->plan.total_length ||
                        (plan.total_length == best->plan.total_length && voxel < best->voxel);
    if (better) best = OriginChoice{voxel, plan.origin, std::move(plan), 0};
  }
  if (!best) throw NoPlanError("select_next_origin: no candidate admits a star discovery");
  best->candidates_evaluated = n;
  return *best;
}

std::optional<PlannedPath> plan_path(const TraversabilityGrid& trav, const Vec3& from, const Vec3& to) {
  const GridGeometry& g = trav.geometry();
  const VoxelIndex sv = g.voxel_of(from);
  const VoxelIndex gv = g.voxel_of(to);
  if (!g.contains(sv) || !g.contains(gv)) throw std::invalid_argument("plan_path: endpoint outside the grid");
  if (!trav.traversable(sv) || !trav.traversable(gv)) return std::nullopt;

  const std::size_t start = g.linear(sv);
  const std::size_t goal = g.linear(gv);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();
  std::vector<double> cost(g.size(), kInf);
  std::vector<std::size_t> parent(g.size(), kNoParent);
  std::vector<std::uint8_t> closed(g.size(), 0);

  auto heuristic = [&](const VoxelIndex& v) { return (v - gv).cast<double>().norm(); };
  using Entry = std::tuple<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  cost[start] = 0.0;
  open.emplace(heuristic(sv), start);

  bool found = false;
  while (!open.empty()) {
    const auto [f, cur] = open.top();
    open.pop();
    if (closed[cur]) continue;
    closed[cur] = 1;
    if (cur == goal) {
      found = true;
      break;
    }
    const VoxelIndex v = g.unravel(cur);
    for (int axis = 0; axis < 3; ++axis) {
      for (int s : {-1, 1}) {
        VoxelIndex n = v;
        n[axis] += s;
        if (!trav.traversable(n)) continue;
        const std::size_t nl = g.linear(n);
        const double c = cost[cur] + 1.0;
        if (closed[nl] || c >= cost[nl]) continue;
        cost[nl] = c;
        parent[nl] = cur;
        open.emplace(c + heuristic(n), nl);
      }
    }
  }
  if (!found) return std::nullopt;

  PlannedPath path;
  for (std::size_t cur = goal; cur != kNoParent; cur = parent[cur]) path.voxels.push_back(cur);
  std::reverse(path.voxels.begin(), path.voxels.end());

  std::vector<Vec3> chain;
  chain.push_back(from);
  for (std::size_t i = 1; i + 1 < path.voxels.size(); ++i) chain.push_back(g.center(g.unravel(path.voxels[i])));
  chain.push_back(to);
  if (path.voxels.size() == 1) chain = {from, to};

  std::size_t i = 0;
  path.waypoints.push_back(chain.front());
  while (i + 1 < chain.size()) {
    std::size_t j = chain.size() - 1;
    while (j > i + 1 && !trav.segment_traversable(chain[i], chain[j])) --j;
    path.waypoints.push_back(chain[j]);
    path.length += (chain[j] - chain[i]).norm();
    i = j;
  }
  return path;
}

}  // namespace sdexp
