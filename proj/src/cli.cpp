#include "sdexp/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "sdexp/map_io.hpp"
#include "sdexp/mission.hpp"
#include "sdexp/motion_optimality.hpp"

namespace sdexp {

using nlohmann::json;

namespace {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool verbose = false;
};

int cmd_run(const std::string& scenario_path, const GlobalOptions& g, std::ostream& out) {
  ScenarioConfig config = load_scenario(scenario_path);
  if (g.seed) config.mission.seed = *g.seed;
  if (g.out_dir) config.out_dir = *g.out_dir;
  const MissionLog log = run_mission(config);
  write_mission_outputs(log, config.out_dir);
  write_metrics_table(out, log, g.verbose);
  out << "status: " << log.status << "\n";
  out << "outputs: " << config.out_dir << "\n";
  return 0;
}

json summary_to_json(const McSummary& s, const McConfig& c) {
  json slots = json::array();
  for (const EigenSlotStats& e : s.slots)
    slots.push_back({{"eigenvalue_mean", e.value_mean},
                     {"eigenvalue_std", e.value_std},
                     {"eigenvector_mean", vec_to_json(e.vector_mean)},
                     {"eigenvector_std", vec_to_json(e.vector_std)}});
  const auto& in = c.intrinsics;
  return {{"trials", s.trials},
          {"points", s.n_points},
          {"seed", c.seed},
          {"depth_min_m", c.depth_min},
          {"depth_max_m", c.depth_max},
          {"camera",
           {{"fx_px", in.fx}, {"fy_px", in.fy}, {"cx_px", in.cx}, {"cy_px", in.cy}, {"width_px", in.width},
            {"height_px", in.height}}},
          {"slots", slots}};
}

void print_summary(std::ostream& out, const McSummary& s) {
  out << "slot  eigenvalue (mean +- std)       eigenvector mean (x, y, z)\n";
  out << std::fixed;
  for (std::size_t i = 0; i < 3; ++i) {
    const EigenSlotStats& e = s.slots[i];
    out << "l" << (i + 1) << "    " << std::setprecision(1) << std::setw(10) << e.value_mean << " +- " << std::setw(8)
        << e.value_std << "      (" << std::setprecision(4) << std::setw(7) << e.vector_mean.x() << ", "
        << std::setw(7) << e.vector_mean.y() << ", " << std::setw(7) << e.vector_mean.z() << ")\n";
  }
  out << std::defaultfloat;
}

int cmd_analyze(McConfig config, const GlobalOptions& g, std::ostream& out) {
  if (g.seed) config.seed = *g.seed;
  config.intrinsics.validate();
  const McSummary s = monte_carlo_summary(config);
  print_summary(out, s);
  const std::filesystem::path dir = g.out_dir.value_or("out");
  std::filesystem::create_directories(dir);
  const auto path = dir / "direction_analysis.json";
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  os << summary_to_json(s, config).dump(2) << '\n';
  if (g.verbose) out << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_map_stats(const std::string& path, std::ostream& out) {
  const OccupancyGrid map = load_map_text(path);
  const StateCounts c = count_states(map);
  const GridGeometry& g = map.geometry();
  const MissionMetrics m = counters_from(c, 0, 0);
  out << "resolution_m  " << g.resolution << "\n";
  out << "dims          " << g.dims.x() << " " << g.dims.y() << " " << g.dims.z() << "\n";
  out << "n_bbox        " << c.n_bbox << "\n";
  out << "n_free        " << c.n_free << "\n";
  out << "n_occupied    " << c.n_occupied << "\n";
  out << "n_unknown     " << c.n_unknown << "\n";
  out << "free_over_known  ";
  if (m.free_over_known)
    out << std::fixed << std::setprecision(4) << *m.free_over_known << "\n";
  else
    out << "n/a\n";
  out << "free_over_bbox   " << std::fixed << std::setprecision(4) << m.free_over_bbox << "\n" << std::defaultfloat;
  return 0;
}

int cmd_replay(const std::string& path, const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open mission log '" + path + "'");
  json log;
  try {
    log = json::parse(is);
  } catch (const json::exception& e) {
    throw std::runtime_error("mission log '" + path + "': " + e.what());
  }
  const ReplayResult r = replay_mission_log(log);
  const StateCounts c = count_states(r.map);
  out << "keyframes   " << r.n_keyframes << "\n";
  out << "points      " << r.n_points << "\n";
  out << "n_free      " << c.n_free << " (logged " << r.logged.n_free << ")\n";
  out << "n_occupied  " << c.n_occupied << " (logged " << r.logged.n_occupied << ")\n";
  out << "n_bbox      " << c.n_bbox << " (logged " << r.logged.n_bbox << ")\n";
  if (g.out_dir) {
    std::filesystem::create_directories(*g.out_dir);
    save_map_text((std::filesystem::path(*g.out_dir) / "replay_map.txt").string(), r.map);
  }
  const bool match =
      c.n_free == r.logged.n_free && c.n_occupied == r.logged.n_occupied && c.n_bbox == r.logged.n_bbox;
  if (!match) {
    err << "sdexp: replay of '" << path << "' does not reproduce the logged counters\n";
    return 3;
  }
  out << "replay matches log\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-dense exploration simulator", "sdexp"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  GlobalOptions g;
  std::uint64_t seed = 0;
  std::string out_dir;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides the scenario)");
  auto* out_opt = app.add_option("--out-dir", out_dir, "Output directory");
  app.add_flag("-v,--verbose", g.verbose, "Print timings and extra detail");

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "Run a full exploration mission")->fallthrough();
  run->add_option("scenario", scenario_path, "Scenario file")->required();

  McConfig mc;
  auto* analyze = app.add_subcommand("analyze-direction", "Monte-Carlo motion-direction analysis")->fallthrough();
  analyze->add_option("--trials", mc.trials, "Number of random trials")->capture_default_str();
  analyze->add_option("--points", mc.n_points, "Points per trial")->capture_default_str();
  analyze->add_option("--depth-min", mc.depth_min, "Minimum depth [m]")->capture_default_str();
  analyze->add_option("--depth-max", mc.depth_max, "Maximum depth [m]")->capture_default_str();
  analyze->add_option("--fx", mc.intrinsics.fx, "Focal length x [px]")->capture_default_str();
  analyze->add_option("--fy", mc.intrinsics.fy, "Focal length y [px]")->capture_default_str();
  analyze->add_option("--cx", mc.intrinsics.cx, "Principal point x [px]")->capture_default_str();
  analyze->add_option("--cy", mc.intrinsics.cy, "Principal point y [px]")->capture_default_str();
  analyze->add_option("--width", mc.intrinsics.width, "Image width [px]")->capture_default_str();
  analyze->add_option("--height", mc.intrinsics.height, "Image height [px]")->capture_default_str();

  std::string map_path;
  auto* stats = app.add_subcommand("map-stats", "Print voxel counters of an exported map")->fallthrough();
  stats->add_option("map", map_path, "Map file")->required();

  std::string log_path;
  auto* replay = app.add_subcommand("replay", "Re-integrate a logged mission")->fallthrough();
  replay->add_option("log", log_path, "Mission log file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  if (*seed_opt) g.seed = seed;
  if (*out_opt) g.out_dir = out_dir;

  try {
    if (*run) return cmd_run(scenario_path, g, out);
    if (*analyze) return cmd_analyze(mc, g, out);
    if (*stats) return cmd_map_stats(map_path, out);
    if (*replay) return cmd_replay(log_path, g, out, err);
  } catch (const std::exception& e) {
    err << "sdexp: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace sdexp
