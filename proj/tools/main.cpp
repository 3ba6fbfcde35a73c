#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "behex/checks.hpp"
#include "behex/config.hpp"
#include "behex/grid.hpp"
#include "behex/sim.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIncomplete = 2;
constexpr int kExitCheckFailed = 3;

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string metrics_csv(const behex::sim::SimConfig& cfg,
                        const behex::sim::EpisodeMetrics& m, double cost) {
  std::ostringstream os;
  os << "seed,alpha_lo,alpha_hi,radius,noise,robots,iterations,completed,total_path,cost,"
        "final_entropy,initial_entropy\n";
  os << cfg.seed << ',' << num17(cfg.alpha_lo) << ',' << num17(cfg.alpha_hi) << ','
     << num17(cfg.sensing_radius) << ',' << cfg.noise << ',' << cfg.robots << ','
     << m.iterations << ',' << (m.completed ? 1 : 0) << ',' << num17(m.total_path) << ','
     << num17(cost) << ',' << num17(m.final_entropy) << ',' << num17(m.initial_entropy)
     << '\n';
  return os.str();
}

std::string trace_csv(const behex::sim::EpisodeMetrics& m) {
  std::ostringstream os;
  os << "tick,entropy\n";
  for (std::size_t t = 0; t < m.entropy_trace.size(); ++t)
    os << t << ',' << num17(m.entropy_trace[t]) << '\n';
  return os.str();
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int snapshot_every) {
  behex::sim::SimConfig cfg;
  try {
    cfg = behex::config::sim_config_from(behex::config::KeyValueFile::parse_file(config_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    fs::create_directories(out_dir);
    behex::sim::SnapshotFn snap;
    if (snapshot_every > 0)
      snap = [&out_dir](const behex::world::OccupancyGrid& g, int tick) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%06d.ogrid", tick);
        behex::world::save_grid_file(g, (fs::path(out_dir) / name).string());
      };
    const auto result = behex::sim::run_episode(cfg, snap, snapshot_every);
    // Single-episode cost is degenerate by definition (both ranges empty).
    const double cost = result.metrics.completed ? 0.0
                                                 : std::numeric_limits<double>::quiet_NaN();
    write_file(fs::path(out_dir) / "metrics.csv", metrics_csv(cfg, result.metrics, cost));
    write_file(fs::path(out_dir) / "entropy_trace.csv", trace_csv(result.metrics));
    behex::world::save_grid_file(result.final_map,
                                 (fs::path(out_dir) / "final_map.ogrid").string());
    if (!result.metrics.completed) {
      std::cerr << "episode incomplete after " << result.metrics.iterations << " ticks\n";
      return kExitIncomplete;
    }
    std::cout << "completed in " << result.metrics.iterations
              << " ticks, total path " << num17(result.metrics.total_path) << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, int jobs) {
  behex::sim::SweepSpec spec;
  try {
    const auto kv = behex::config::KeyValueFile::parse_file(config_path);
    spec.base = behex::config::sim_config_from(kv);
    const auto lists = behex::config::sweep_lists_from(kv);
    spec.alpha_ranges = lists.alpha_ranges;
    spec.radii = lists.radii;
    spec.noises = lists.noises;
    spec.trials = lists.trials;
    spec.jobs = jobs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    fs::create_directories(out_dir);
    const auto result = behex::sim::run_sweep(spec);
    write_file(fs::path(out_dir) / "sweep.csv", result.to_csv());

    // Per-range cost summary over completed episodes.
    std::map<std::pair<double, double>, std::vector<double>> by_range;
    for (const auto& row : result.rows)
      if (row.completed && std::isfinite(row.cost))
        by_range[{row.alpha_lo, row.alpha_hi}].push_back(row.cost);
    std::cout << "alpha_range,mean_cost,stddev_cost,episodes\n";
    for (const auto& [range, costs] : by_range) {
      double mean = 0.0;
      for (double c : costs) mean += c;
      mean /= static_cast<double>(costs.size());
      double var = 0.0;
      for (double c : costs) var += (c - mean) * (c - mean);
      var = costs.size() > 1 ? var / static_cast<double>(costs.size() - 1) : 0.0;
      std::printf("(%g:%g),%.6f,%.6f,%zu\n", range.first, range.second, mean, std::sqrt(var),
                  costs.size());
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_check(const std::string& suite) {
  try {
    const auto results = behex::checks::run_suite(suite);
    int failed = 0;
    for (const auto& r : results) {
      std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
      if (!r.pass) ++failed;
    }
    std::cout << (static_cast<int>(results.size()) - failed) << "/" << results.size()
              << " checks passed\n";
    return failed == 0 ? kExitOk : kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_mapgen(const std::string& kind, int width, int height, std::uint64_t seed,
               const std::string& out_path) {
  try {
    const auto grid = behex::world::generate_map(behex::world::map_kind_from_string(kind),
                                                 width, height, seed);
    behex::world::save_grid_file(grid, out_path);
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"behex: behavioral-entropy multi-robot exploration simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  int jobs = 1, snapshot_every = 0;

  auto* run = app.add_subcommand("run", "run one exploration episode");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--snapshot-every", snapshot_every, "write a map snapshot every N ticks");

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("--config", config_path, "config file")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--jobs", jobs, "parallel episodes");

  std::string suite;
  auto* check = app.add_subcommand("check", "run a verification suite");
  check->add_option("suite", suite, "entropy | allocation | dro | lemma | prop")->required();

  std::string kind = "rooms", map_out = "map.ogrid";
  int width = 40, height = 40;
  std::uint64_t seed = 0;
  bool seed_set = false;
  auto* mapgen = app.add_subcommand("mapgen", "generate a ground-truth map");
  mapgen->add_option("--kind", kind, "open | rooms | corridors");
  mapgen->add_option("--width", width, "grid width (cells)");
  mapgen->add_option("--height", height, "grid height (cells)");
  mapgen->add_option("--seed", seed, "generator seed")->each([&](const std::string&) {
    seed_set = true;
  });
  mapgen->add_option("--out", map_out, "output OGRID path");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, out_dir, snapshot_every);
  if (sweep->parsed()) return cmd_sweep(config_path, out_dir, jobs);
  if (check->parsed()) return cmd_check(suite);
  if (mapgen->parsed()) {
    if (!seed_set) {
      std::cerr << "error: --seed is required (no wall-clock default)\n";
      return kExitConfig;
    }
    return cmd_mapgen(kind, width, height, seed, map_out);
  }
  return kExitConfig;
}
