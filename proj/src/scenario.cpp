#include "sdexp/scenario.hpp"

#include <fstream>
#include <set>

namespace sdexp {

using nlohmann::json;

nlohmann::json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-element array, got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void ScenarioConfig::resolve() {
  const double res = map.resolution;
  if (exploration.heights.empty()) exploration.heights = {mission.start.z() - res, mission.start.z(), mission.start.z() + res};
  if (exploration.margin < 0.0) exploration.margin = 1.5 * res;
  const Vec3 body((exploration.inflate_hor + 0.5) * res, (exploration.inflate_hor + 0.5) * res,
                  (exploration.inflate_ver + 0.5) * res);
  for (int a = 0; a < 3; ++a)
    if (map.body_half_extent[a] < 0.0) map.body_half_extent[a] = body[a];
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("scenario: " + what); };
  try {
    intrinsics.validate();
    render.validate();
    map.sensor.validate();
    (void)world();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (boxes.empty()) fail("world.boxes is empty");
  if (!(map.resolution > 0.0)) fail("map.resolution_m must be positive");
  if (!(map.bounds_margin >= 0.0)) fail("map.bounds_margin_m must be >= 0");
  if (exploration.n_rays < 1) fail("exploration.n_rays must be >= 1");
  if (exploration.heights.empty()) fail("exploration.heights_m is empty");
  if (!(exploration.margin >= 0.0)) fail("exploration.margin_m must be >= 0");
  if (exploration.n_candidates < 1) fail("exploration.n_candidates must be >= 1");
  if (exploration.inflate_hor < 0 || exploration.inflate_ver < 0) fail("inflation radii must be >= 0");
  if (mission.max_star_discoveries < 0) fail("mission.max_star_discoveries must be >= 0");
  if (mission.look_around_steps < 4) fail("mission.look_around_steps must be >= 4");
  if (!(mission.capture_spacing > 0.0)) fail("mission.capture_spacing_m must be positive");
  if (!(mission.position_noise >= 0.0) || !(mission.heading_noise >= 0.0)) fail("pose noise must be >= 0");
  if (!(mission.min_free_growth >= 0.0)) fail("mission.min_free_growth_ratio must be >= 0");
  const auto [lo, hi] = map_bounds();
  if (!((mission.start.array() > lo.array()).all() && (mission.start.array() < hi.array()).all()))
    fail("mission.start_m lies outside the map bounds");
  if (world().inside_solid(mission.start)) fail("mission.start_m lies inside solid geometry");
}

std::pair<Vec3, Vec3> ScenarioConfig::map_bounds() const {
  auto [lo, hi] = WorldModel(boxes).bounds();
  return {lo - Vec3::Constant(map.bounds_margin), hi + Vec3::Constant(map.bounds_margin)};
}

namespace {

const char* storage_name(StorageKind k) { return k == StorageKind::Dense ? "dense" : "octree"; }

StorageKind parse_storage(const std::string& s) {
  if (s == "dense") return StorageKind::Dense;
  if (s == "octree") return StorageKind::Octree;
  throw ConfigError("map.storage must be 'dense' or 'octree', got '" + s + "'");
}

// Reads `key` into `out` when present and records it as consumed.
class Section {
 public:
  Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError("section '" + name_ + "' must be an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(name_ + "." + key + ": " + e.what());
    }
  }

  void get_vec(const char* key, Vec3& out) {
    seen_.insert(key);
    if (j_.contains(key)) out = vec_from_json(j_.at(key));
  }

  const json* sub(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError("unknown key '" + name_ + "." + k + "'");
  }

 private:
  const json& j_;
  std::string name_;
  std::set<std::string> seen_;
};

json box_to_json(const Box& b) {
  json jb;
  jb["name"] = b.name;
  jb["min_m"] = vec_to_json(b.min);
  jb["max_m"] = vec_to_json(b.max);
  jb["solid"] = b.solid;
  json tex = json::array();
  for (int f = 0; f < 6; ++f)
    if (b.textured[static_cast<std::size_t>(f)]) tex.push_back(face_name(f));
  jb["textured_faces"] = tex;
  json edges = json::array();
  for (int f = 0; f < 6; ++f)
    for (const EdgeSegment& e : b.extra_edges[static_cast<std::size_t>(f)])
      edges.push_back({{"face", face_name(f)}, {"a_m", vec_to_json(e.a)}, {"b_m", vec_to_json(e.b)}});
  jb["edges"] = edges;
  return jb;
}

Box box_from_json(const json& j, std::size_t index) {
  Box b;
  b.name = "box" + std::to_string(index);
  Section s(j, "world.boxes[" + std::to_string(index) + "]");
  s.get("name", b.name);
  s.get_vec("min_m", b.min);
  s.get_vec("max_m", b.max);
  s.get("solid", b.solid);
  std::vector<std::string> tex;
  s.get("textured_faces", tex);
  try {
    for (const auto& f : tex) b.textured[static_cast<std::size_t>(parse_face_name(f))] = true;
    if (const json* edges = s.sub("edges")) {
      for (const json& e : *edges) {
        Section es(e, "edge");
        std::string face;
        EdgeSegment seg{Vec3::Zero(), Vec3::Zero()};
        es.get("face", face);
        es.get_vec("a_m", seg.a);
        es.get_vec("b_m", seg.b);
        es.finish();
        b.extra_edges[static_cast<std::size_t>(parse_face_name(face))].push_back(seg);
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  s.finish();
  return b;
}

}  // namespace

json to_json(const ScenarioConfig& c) {
  json j;
  json boxes = json::array();
  for (const Box& b : c.boxes) boxes.push_back(box_to_json(b));
  j["world"] = {{"boxes", boxes}};
  j["camera"] = {{"fx_px", c.intrinsics.fx},       {"fy_px", c.intrinsics.fy},
                 {"cx_px", c.intrinsics.cx},       {"cy_px", c.intrinsics.cy},
                 {"width_px", c.intrinsics.width}, {"height_px", c.intrinsics.height}};
  j["render"] = {{"edge_pixel_radius_px", c.render.edge_pixel_radius},
                 {"pixel_stride_px", c.render.pixel_stride},
                 {"depth_noise_sigma0", c.render.depth_noise_sigma0},
                 {"variance_coeff", c.render.variance_coeff}};
  const SensorModelParams& s = c.map.sensor;
  j["map"] = {{"resolution_m", c.map.resolution},
              {"p_hit", s.p_hit},
              {"p_miss", s.p_miss},
              {"p_min", s.p_min},
              {"p_max", s.p_max},
              {"occupancy_threshold", s.occupancy_threshold},
              {"variance_threshold_m2", s.variance_threshold},
              {"k_sigma", s.k_sigma},
              {"storage", storage_name(c.map.storage)},
              {"bounds_margin_m", c.map.bounds_margin},
              {"body_half_extent_m", vec_to_json(c.map.body_half_extent)}};
  j["exploration"] = {{"n_rays", c.exploration.n_rays},
                      {"heights_m", c.exploration.heights},
                      {"margin_m", c.exploration.margin},
                      {"n_candidates", c.exploration.n_candidates},
                      {"inflate_hor_voxels", c.exploration.inflate_hor},
                      {"inflate_ver_voxels", c.exploration.inflate_ver},
                      {"candidate_own_height", c.exploration.include_candidate_height}};
  j["mission"] = {{"start_m", vec_to_json(c.mission.start)},
                  {"max_star_discoveries", c.mission.max_star_discoveries},
                  {"seed", c.mission.seed},
                  {"look_around_steps", c.mission.look_around_steps},
                  {"look_around_amp_m", c.mission.look_around_amp},
                  {"capture_spacing_m", c.mission.capture_spacing},
                  {"pose_noise_m", c.mission.position_noise},
                  {"heading_noise_rad", c.mission.heading_noise},
                  {"min_free_growth_ratio", c.mission.min_free_growth}};
  j["output"] = {{"dir", c.out_dir}};
  return j;
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig c;
  Section root(j, "scenario");

  const json* world = root.sub("world");
  if (!world) throw ConfigError("scenario: missing 'world' section");
  {
    Section w(*world, "world");
    const json* boxes = w.sub("boxes");
    if (!boxes || !boxes->is_array()) throw ConfigError("world.boxes must be an array");
    for (std::size_t i = 0; i < boxes->size(); ++i) c.boxes.push_back(box_from_json((*boxes)[i], i));
    w.finish();
  }
  if (const json* cam = root.sub("camera")) {
    Section s(*cam, "camera");
    s.get("fx_px", c.intrinsics.fx);
    s.get("fy_px", c.intrinsics.fy);
    s.get("cx_px", c.intrinsics.cx);
    s.get("cy_px", c.intrinsics.cy);
    s.get("width_px", c.intrinsics.width);
    s.get("height_px", c.intrinsics.height);
    s.finish();
  }
  if (const json* r = root.sub("render")) {
    Section s(*r, "render");
    s.get("edge_pixel_radius_px", c.render.edge_pixel_radius);
    s.get("pixel_stride_px", c.render.pixel_stride);
    s.get("depth_noise_sigma0", c.render.depth_noise_sigma0);
    s.get("variance_coeff", c.render.variance_coeff);
    s.finish();
  }
  if (const json* m = root.sub("map")) {
    Section s(*m, "map");
    s.get("resolution_m", c.map.resolution);
    s.get("p_hit", c.map.sensor.p_hit);
    s.get("p_miss", c.map.sensor.p_miss);
    s.get("p_min", c.map.sensor.p_min);
    s.get("p_max", c.map.sensor.p_max);
    s.get("occupancy_threshold", c.map.sensor.occupancy_threshold);
    s.get("variance_threshold_m2", c.map.sensor.variance_threshold);
    s.get("k_sigma", c.map.sensor.k_sigma);
    std::string storage = storage_name(c.map.storage);
    s.get("storage", storage);
    c.map.storage = parse_storage(storage);
    s.get("bounds_margin_m", c.map.bounds_margin);
    s.get_vec("body_half_extent_m", c.map.body_half_extent);
    s.finish();
  }
  if (const json* e = root.sub("exploration")) {
    Section s(*e, "exploration");
    s.get("n_rays", c.exploration.n_rays);
    s.get("heights_m", c.exploration.heights);
    s.get("margin_m", c.exploration.margin);
    s.get("n_candidates", c.exploration.n_candidates);
    s.get("inflate_hor_voxels", c.exploration.inflate_hor);
    s.get("inflate_ver_voxels", c.exploration.inflate_ver);
    s.get("candidate_own_height", c.exploration.include_candidate_height);
    s.finish();
  }
  if (const json* m = root.sub("mission")) {
    Section s(*m, "mission");
    s.get_vec("start_m", c.mission.start);
    s.get("max_star_discoveries", c.mission.max_star_discoveries);
    s.get("seed", c.mission.seed);
    s.get("look_around_steps", c.mission.look_around_steps);
    s.get("look_around_amp_m", c.mission.look_around_amp);
    s.get("capture_spacing_m", c.mission.capture_spacing);
    s.get("pose_noise_m", c.mission.position_noise);
    s.get("heading_noise_rad", c.mission.heading_noise);
    s.get("min_free_growth_ratio", c.mission.min_free_growth);
    s.finish();
  }
  if (const json* o = root.sub("output")) {
    Section s(*o, "output");
    s.get("dir", c.out_dir);
    s.finish();
  }
  root.finish();
  c.resolve();
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open scenario file '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("scenario file '" + path + "': " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const std::exception& e) {
    throw ConfigError("scenario file '" + path + "': " + e.what());
  }
}

void save_scenario(const std::string& path, const ScenarioConfig& c) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  os << to_json(c).dump(2) << '\n';
}

}  // namespace sdexp
