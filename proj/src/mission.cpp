#include "sdexp/mission.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "sdexp/map_io.hpp"
#include "sdexp/random.hpp"
#include "sdexp/sensor_sim.hpp"
#include "sdexp/traversability.hpp"

namespace sdexp {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

constexpr std::uint64_t kFrameStream = 0x4652414D45000000ULL;
constexpr std::uint64_t kFlightStream = 0x464C494748540000ULL;
constexpr std::uint64_t kSelectStream = 0x53454C4543540000ULL;

// Mutable state threaded through the phases.
struct Mission {
  const ScenarioConfig& cfg;
  WorldModel world;
  MissionLog log;
  std::size_t n_points = 0;
  std::optional<OccupancyGrid> map;
  std::optional<TraversabilityGrid> trav;

  explicit Mission(const ScenarioConfig& c) : cfg(c), world(c.world()) { log.config = c; }

  void capture(PhaseRecord& phase, const std::vector<Pose>& poses) {
    phase.first_keyframe = log.keyframes.size();
    for (const Pose& p : poses) {
      const std::uint64_t seed = frame_seed(cfg.mission.seed, log.keyframes.size());
      log.keyframes.push_back(render_semidense(world, p, cfg.intrinsics, cfg.render, seed));
      log.frame_seeds.push_back(seed);
      n_points += log.keyframes.back().measurements.size();
    }
    phase.poses = poses;
  }

  // Regenerates the map from all keyframes and re-inflates it.
  void rebuild(MissionMetrics& m) {
    auto t0 = Clock::now();
    map = regenerate(log.keyframes, regenerate_params(cfg));
    m.t_map_build_s = seconds_since(t0);
    t0 = Clock::now();
    trav = inflate(*map, cfg.exploration.inflate_hor, cfg.exploration.inflate_ver);
    m.t_inflate_s = seconds_since(t0);
  }

  void finish_phase(PhaseRecord& phase) {
    MissionMetrics counters = counters_from(count_states(*map), log.keyframes.size(), n_points);
    counters.t_map_build_s = phase.metrics.t_map_build_s;
    counters.t_inflate_s = phase.metrics.t_inflate_s;
    counters.t_mark_visible_s = phase.metrics.t_mark_visible_s;
    counters.t_path_s = phase.metrics.t_path_s;
    phase.metrics = counters;
    phase.map = *map;
    log.phases.push_back(std::move(phase));
  }

  std::vector<Pose> fly(const std::vector<Waypoint>& wps, std::size_t phase_no) {
    FlightParams fp;
    fp.capture_spacing = cfg.mission.capture_spacing;
    fp.position_noise = cfg.mission.position_noise;
    fp.heading_noise = cfg.mission.heading_noise;
    fp.seed = derive_seed(cfg.mission.seed, kFlightStream + phase_no);
    return execute_waypoints(wps, fp);
  }
};

std::vector<Waypoint> path_waypoints(const std::vector<Vec3>& points, double initial_heading) {
  std::vector<Waypoint> out;
  double heading = initial_heading;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) {
      const Vec3 d = points[i] - points[i - 1];
      if (std::hypot(d.x(), d.y()) > 1e-9) heading = std::atan2(d.y(), d.x());
    }
    out.push_back({points[i], heading});
  }
  // the first sample takes the heading of the first segment
  if (out.size() > 1) out.front().heading = out[1].heading;
  return out;
}

}  // namespace

std::uint64_t frame_seed(std::uint64_t mission_seed, std::size_t index) {
  return derive_seed(mission_seed, kFrameStream + index);
}

MissionMetrics counters_from(const StateCounts& counts, std::size_t n_keyframes, std::size_t n_points) {
  MissionMetrics m;
  m.n_bbox = counts.n_bbox;
  m.n_free = counts.n_free;
  m.n_occupied = counts.n_occupied;
  const std::size_t known = counts.n_free + counts.n_occupied;
  if (known > 0) m.free_over_known = static_cast<double>(counts.n_free) / static_cast<double>(known);
  m.free_over_bbox = counts.n_bbox > 0 ? static_cast<double>(counts.n_free) / static_cast<double>(counts.n_bbox) : 0.0;
  m.n_keyframes = n_keyframes;
  m.n_points = n_points;
  return m;
}

RegenerateParams regenerate_params(const ScenarioConfig& config) {
  RegenerateParams p;
  p.resolution = config.map.resolution;
  p.sensor = config.map.sensor;
  p.storage = config.map.storage;
  p.bounds = config.map_bounds();
  if (config.map.body_half_extent.maxCoeff() > 0.0) p.body_half_extent = config.map.body_half_extent;
  return p;
}

MissionLog run_mission(const ScenarioConfig& config_in) {
  ScenarioConfig config = config_in;
  config.resolve();
  config.validate();

  Mission ms(config);
  const auto& mc = config.mission;

  {
    PhaseRecord phase;
    phase.name = "look-around";
    phase.kind = PhaseKind::LookAround;
    ms.capture(phase, look_around_poses(mc.start, mc.look_around_steps, mc.look_around_amp));
    ms.rebuild(phase.metrics);
    ms.finish_phase(phase);
  }

  StarParams star_params;
  star_params.n_rays = config.exploration.n_rays;
  star_params.heights = config.exploration.heights;
  star_params.margin = config.exploration.margin;

  Vec3 position = mc.start;
  double heading = 0.0;
  ms.log.status = kStatusMaxDiscoveries;
  std::size_t phase_no = 1;

  for (int k = 1; k <= mc.max_star_discoveries; ++k) {
    PhaseRecord star;
    star.name = "star-discovery-" + std::to_string(k);
    star.kind = PhaseKind::StarDiscovery;
    star.index = k;
    star.plan_keyframes = ms.log.keyframes.size();

    StarPlan plan;
    try {
      plan = plan_star_discovery(*ms.trav, position, star_params);
    } catch (const NoPlanError&) {
      ms.log.status = kStatusComplete;
      break;
    }
    if (plan.legs.empty()) {
      ms.log.status = kStatusComplete;
      break;
    }

    const double first_heading = plan.waypoints.front().heading;
    star.commanded.push_back({position, first_heading});
    star.commanded.push_back({plan.origin, first_heading});
    star.commanded.insert(star.commanded.end(), plan.waypoints.begin(), plan.waypoints.end());
    ms.capture(star, ms.fly(star.commanded, phase_no++));
    ms.log.star_origins.push_back(plan.origin);
    position = plan.origin;
    heading = plan.waypoints.back().heading;
    star.star = plan;

    const std::size_t free_before = ms.log.phases.back().metrics.n_free;
    ms.rebuild(star.metrics);

    auto t0 = Clock::now();
    const StateGrid states = snapshot_states(*ms.map);
    const auto visited = mark_visited(states, ms.log.star_origins);
    const auto interesting = interesting_voxels(*ms.trav, visited);
    star.metrics.t_mark_visible_s = seconds_since(t0);
    star.n_interesting = interesting.size();

    t0 = Clock::now();
    const auto components = connected_components(states.geometry, interesting);
    star.n_components = components.size();
    star.largest_component = components.empty() ? 0 : components.front().size();
    SelectionParams sel;
    sel.n_candidates = config.exploration.n_candidates;
    sel.star = star_params;
    sel.include_candidate_height = config.exploration.include_candidate_height;
    sel.seed = derive_seed(mc.seed, kSelectStream + static_cast<std::uint64_t>(k));
    for (std::size_t c = 0; c < components.size() && !star.path; ++c) {
      try {
        OriginChoice choice = select_next_origin(*ms.trav, std::span(components).subspan(c), sel);
        if (auto path = plan_path(*ms.trav, position, choice.origin)) {
          star.next_origin = std::move(choice);
          star.path = std::move(*path);
        }
      } catch (const NoPlanError&) {
      }
    }
    star.metrics.t_path_s = seconds_since(t0);

    const bool have_next = star.path.has_value();
    const std::size_t reposition_plan_keyframes = ms.log.keyframes.size();
    std::optional<PlannedPath> path = star.path;
    std::optional<OriginChoice> next = star.next_origin;
    ms.finish_phase(star);

    if (!have_next) {
      ms.log.status = kStatusComplete;
      break;
    }
    const std::size_t free_after = ms.log.phases.back().metrics.n_free;
    if (mc.min_free_growth > 0.0 && free_before > 0 &&
        static_cast<double>(free_after) < (1.0 + mc.min_free_growth) * static_cast<double>(free_before)) {
      ms.log.status = kStatusLowGrowth;
      break;
    }

    PhaseRecord repo;
    repo.name = "reposition-" + std::to_string(k);
    repo.kind = PhaseKind::Reposition;
    repo.index = k;
    repo.plan_keyframes = reposition_plan_keyframes;
    repo.commanded = path_waypoints(path->waypoints, heading);
    repo.path = path;
    repo.next_origin = next;
    ms.capture(repo, ms.fly(repo.commanded, phase_no++));
    position = next->origin;
    heading = repo.commanded.back().heading;
    ms.rebuild(repo.metrics);
    ms.finish_phase(repo);
  }
  return std::move(ms.log);
}

// ---------------------------------------------------------------------------
// metrics

namespace {

std::string fmt_ratio(const std::optional<double>& r) {
  if (!r) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << *r;
  return os.str();
}

std::string fmt_seconds(const std::optional<double>& t) {
  if (!t) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << *t;
  return os.str();
}

const std::vector<std::string> kCounterColumns{"phase",          "n_bbox",        "n_free",      "n_occupied",
                                               "free_over_known", "free_over_bbox", "n_keyframes", "n_points"};
const std::vector<std::string> kTimingColumns{"t_map_build_s", "t_inflate_s", "t_mark_visible_s", "t_path_s"};

std::vector<std::string> counter_row(const PhaseRecord& p) {
  const MissionMetrics& m = p.metrics;
  return {p.name,
          std::to_string(m.n_bbox),
          std::to_string(m.n_free),
          std::to_string(m.n_occupied),
          fmt_ratio(m.free_over_known),
          fmt_ratio(m.free_over_bbox),
          std::to_string(m.n_keyframes),
          std::to_string(m.n_points)};
}

std::vector<std::string> timing_row(const PhaseRecord& p) {
  const MissionMetrics& m = p.metrics;
  return {fmt_seconds(m.t_map_build_s), fmt_seconds(m.t_inflate_s), fmt_seconds(m.t_mark_visible_s),
          fmt_seconds(m.t_path_s)};
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
  os << '\n';
}

}  // namespace

void write_metrics_csv(std::ostream& os, const MissionLog& log) {
  write_csv_row(os, kCounterColumns);
  for (const PhaseRecord& p : log.phases) write_csv_row(os, counter_row(p));
}

void write_timings_csv(std::ostream& os, const MissionLog& log) {
  std::vector<std::string> header{"phase"};
  header.insert(header.end(), kTimingColumns.begin(), kTimingColumns.end());
  write_csv_row(os, header);
  for (const PhaseRecord& p : log.phases) {
    std::vector<std::string> row{p.name};
    const auto t = timing_row(p);
    row.insert(row.end(), t.begin(), t.end());
    write_csv_row(os, row);
  }
}

void write_metrics_table(std::ostream& os, const MissionLog& log, bool with_timings) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = kCounterColumns;
  if (with_timings) header.insert(header.end(), kTimingColumns.begin(), kTimingColumns.end());
  rows.push_back(header);
  for (const PhaseRecord& p : log.phases) {
    auto row = counter_row(p);
    if (with_timings) {
      const auto t = timing_row(p);
      row.insert(row.end(), t.begin(), t.end());
    }
    rows.push_back(row);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i == 0)
        os << std::left << std::setw(static_cast<int>(width[i])) << r[i];
      else
        os << "  " << std::right << std::setw(static_cast<int>(width[i])) << r[i];
    }
    os << '\n';
  }
  os << std::left;
}

void write_waypoints(std::ostream& os, const std::vector<Waypoint>& waypoints) {
  os << "# x_m y_m z_m heading_rad\n" << std::setprecision(17);
  for (const Waypoint& w : waypoints)
    os << w.position.x() << ' ' << w.position.y() << ' ' << w.position.z() << ' ' << w.heading << '\n';
}

// ---------------------------------------------------------------------------
// log serialization

namespace {

const char* kind_name(PhaseKind k) {
  switch (k) {
    case PhaseKind::LookAround: return "look-around";
    case PhaseKind::StarDiscovery: return "star-discovery";
    case PhaseKind::Reposition: return "reposition";
  }
  return "?";
}

json pose_to_json(const Pose& p) {
  const auto& q = p.orientation;
  return {{"p", vec_to_json(p.position)}, {"q_wxyz", json::array({q.w(), q.x(), q.y(), q.z()})}};
}

Pose pose_from_json(const json& j) {
  Pose p;
  p.position = vec_from_json(j.at("p"));
  const auto& q = j.at("q_wxyz");
  p.orientation = Eigen::Quaterniond(q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>(),
                                     q.at(3).get<double>());
  return p;
}

json waypoints_to_json(const std::vector<Waypoint>& wps) {
  json a = json::array();
  for (const Waypoint& w : wps) a.push_back({{"p", vec_to_json(w.position)}, {"heading_rad", w.heading}});
  return a;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json metrics_to_json(const MissionMetrics& m, bool with_timings) {
  json j{{"n_bbox", m.n_bbox},
         {"n_free", m.n_free},
         {"n_occupied", m.n_occupied},
         {"free_over_known", optional_number(m.free_over_known)},
         {"free_over_bbox", m.free_over_bbox},
         {"n_keyframes", m.n_keyframes},
         {"n_points", m.n_points}};
  if (with_timings) {
    j["t_map_build_s"] = optional_number(m.t_map_build_s);
    j["t_inflate_s"] = optional_number(m.t_inflate_s);
    j["t_mark_visible_s"] = optional_number(m.t_mark_visible_s);
    j["t_path_s"] = optional_number(m.t_path_s);
  }
  return j;
}

}  // namespace

json mission_log_to_json(const MissionLog& log, bool with_timings) {
  json phases = json::array();
  for (const PhaseRecord& p : log.phases) {
    json jp;
    jp["name"] = p.name;
    jp["kind"] = kind_name(p.kind);
    jp["index"] = p.index;
    jp["plan_keyframes"] = p.plan_keyframes;
    jp["first_keyframe"] = p.first_keyframe;
    json poses = json::array();
    for (std::size_t i = 0; i < p.poses.size(); ++i) {
      json jpose = pose_to_json(p.poses[i]);
      jpose["seed"] = log.frame_seeds[p.first_keyframe + i];
      poses.push_back(jpose);
    }
    jp["poses"] = poses;
    jp["commanded"] = waypoints_to_json(p.commanded);
    if (p.star) {
      json legs = json::array();
      for (const StarLeg& l : p.star->legs)
        legs.push_back({{"angle_rad", l.angle}, {"reach_m", l.reach}, {"endpoint", vec_to_json(l.endpoint)}});
      jp["star"] = {{"origin", vec_to_json(p.star->origin)},
                    {"height_index", p.star->height_index},
                    {"total_length_m", p.star->total_length},
                    {"legs", legs}};
    }
    if (p.next_origin)
      jp["next_origin"] = {{"voxel", p.next_origin->voxel},
                           {"origin", vec_to_json(p.next_origin->origin)},
                           {"planned_total_length_m", p.next_origin->plan.total_length}};
    if (p.path) {
      json wps = json::array();
      for (const Vec3& w : p.path->waypoints) wps.push_back(vec_to_json(w));
      jp["path"] = {{"length_m", p.path->length}, {"n_voxels", p.path->voxels.size()}, {"waypoints", wps}};
    }
    if (p.kind == PhaseKind::StarDiscovery) {
      jp["n_interesting"] = p.n_interesting;
      jp["n_components"] = p.n_components;
      jp["largest_component"] = p.largest_component;
    }
    jp["metrics"] = metrics_to_json(p.metrics, with_timings);
    phases.push_back(jp);
  }
  json origins = json::array();
  for (const Vec3& o : log.star_origins) origins.push_back(vec_to_json(o));
  return {{"scenario", to_json(log.config)}, {"status", log.status}, {"star_origins", origins}, {"phases", phases}};
}

void write_mission_outputs(const MissionLog& log, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream os(fs::path(dir) / name);
    if (!os) throw std::runtime_error("cannot write '" + (fs::path(dir) / name).string() + "'");
    return os;
  };
  save_scenario((fs::path(dir) / "scenario_resolved.json").string(), log.config);
  {
    auto os = open("metrics.csv");
    write_metrics_csv(os, log);
  }
  {
    auto os = open("metrics.txt");
    write_metrics_table(os, log, false);
  }
  {
    auto os = open("timings.csv");
    write_timings_csv(os, log);
  }
  {
    auto os = open("mission_log.json");
    os << mission_log_to_json(log).dump(1) << '\n';
  }
  for (std::size_t i = 0; i < log.phases.size(); ++i) {
    const PhaseRecord& p = log.phases[i];
    std::ostringstream name;
    name << "map_" << std::setw(2) << std::setfill('0') << i << "_" << p.name << ".txt";
    if (p.map) save_map_text((fs::path(dir) / name.str()).string(), *p.map);
    if (!p.commanded.empty()) {
      auto os = open("waypoints_" + p.name + ".txt");
      write_waypoints(os, p.commanded);
    }
  }
  if (!log.phases.empty() && log.phases.back().map) {
    save_map_text((fs::path(dir) / "map.txt").string(), *log.phases.back().map);
    save_occupied_mesh_obj((fs::path(dir) / "occupied.obj").string(), *log.phases.back().map);
  }
}

ReplayResult replay_mission_log(const json& log) {
  if (!log.contains("scenario") || !log.contains("phases")) throw std::runtime_error("mission log: missing sections");
  ScenarioConfig config = scenario_from_json(log.at("scenario"));
  const WorldModel world = config.world();
  std::vector<SemiDenseFrame> frames;
  std::size_t n_points = 0;
  for (const json& phase : log.at("phases")) {
    for (const json& jp : phase.at("poses")) {
      frames.push_back(render_semidense(world, pose_from_json(jp), config.intrinsics, config.render,
                                        jp.at("seed").get<std::uint64_t>()));
      n_points += frames.back().measurements.size();
    }
  }
  if (frames.empty()) throw std::runtime_error("mission log: no keyframes");
  const json& last = log.at("phases").back().at("metrics");
  StateCounts logged;
  logged.n_bbox = last.at("n_bbox").get<std::size_t>();
  logged.n_free = last.at("n_free").get<std::size_t>();
  logged.n_occupied = last.at("n_occupied").get<std::size_t>();
  logged.n_unknown = logged.n_bbox - logged.n_free - logged.n_occupied;
  return {regenerate(frames, regenerate_params(config)), frames.size(), n_points, logged};
}

}  // namespace sdexp
