#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "behex/allocation.hpp"
#include "behex/grid.hpp"
#include "behex/world.hpp"

namespace behex::sim {

struct RobotState {
  int id = 0;
  world::Cell pos;
  double alpha = 1.0;
  std::vector<world::Cell> task_buffer;  // frontier representatives, tour order
  double frontier_radius = 0.0;          // map units, >= 10 x sensing radius
  double path_traveled = 0.0;            // map units
};

struct SimConfig {
  // Map: either a generator kind + size, or an OGRID file.
  std::string map_kind = "rooms";
  int map_width = 40;
  int map_height = 40;
  double resolution = 0.1;
  std::string map_file;  // non-empty overrides the generator

  int robots = 3;
  double alpha_lo = 1.0;
  double alpha_hi = 1.0;
  double sensing_radius = 2.0;  // map units
  int noise = 0;                // sigma_m in {0,1,2}
  int buffer_cap = 14;          // N
  std::uint64_t seed = 0;
  double completion_fraction = 0.99;  // fraction of H(0) to remove
  int tick_cap = 500;
  int noise_border = 2;

  // Allocation phase knobs.
  int T = 8;
  int tau = 0;           // 0 = derive from the comm graph (robot count)
  int outer_periods = 12;  // "sufficiently long" = outer_periods * T rounds
  double a0 = 0.05;
  double b0 = 0.5;
  double reward_delta = 0.05;  // per-cell occupancy sample perturbation
  int sample_cap = 256;        // K_i
  double dro_theta = 0.1;

  void validate() const;
};

struct EpisodeMetrics {
  int iterations = 0;
  bool completed = false;
  double total_path = 0.0;
  std::vector<double> per_robot_path;
  std::vector<double> entropy_trace;  // H(0), then one entry per tick
  double initial_entropy = 0.0;
  double final_entropy = 0.0;
};

struct EpisodeResult {
  EpisodeMetrics metrics;
  world::OccupancyGrid final_map;
  int reallocations = 0;
  int partition_violations = 0;  // frontier clusters owned by != 1 robot
  int orphan_fallbacks = 0;      // tasks completed by the argmax fallback
};

using SnapshotFn = std::function<void(const world::OccupancyGrid&, int tick)>;

// PWC[a,b] sampler for behavior parameters: uniform on [a,b] when 1 is not
// interior; otherwise a fair coin between uniform on [a,1] and on [1,b].
std::vector<double> pwc_sample(double a, double b, int count, std::uint64_t seed);

// Adds a deterministic per-(agent, task) perturbation in (0, scale), seeded
// by the ids, guaranteeing a unique dominating agent per task. Refuses a
// scale that could reorder non-tied rewards.
allocation::RewardTable perturb_rewards(const allocation::RewardTable& rewards, double scale,
                                        std::uint64_t seed);

EpisodeResult run_episode(const SimConfig& config, const SnapshotFn& snapshot = {},
                          int snapshot_every = 0);

// Min-max normalized iterations + path cost across a batch; incomplete
// episodes are excluded (their indices reported) and get NaN.
struct CostResult {
  std::vector<double> cost;           // per input episode; NaN when excluded
  std::vector<int> excluded;          // indices of incomplete episodes
  bool degenerate = false;            // single episode or zero ranges
};
CostResult cost_metric(const std::vector<EpisodeMetrics>& batch);

struct SweepSpec {
  SimConfig base;
  std::vector<std::pair<double, double>> alpha_ranges;
  std::vector<double> radii;
  std::vector<int> noises;
  int trials = 1;
  int jobs = 1;
};

struct SweepRow {
  std::uint64_t seed;
  double alpha_lo, alpha_hi, radius;
  int noise, robots, iterations;
  bool completed;
  double total_path, cost, final_entropy, initial_entropy;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // deterministic config order
  std::string to_csv() const;
};

SweepResult run_sweep(const SweepSpec& spec);

}  // namespace behex::sim
