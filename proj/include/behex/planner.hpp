#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "behex/grid.hpp"

namespace behex::planner {

struct Path {
  std::vector<world::Cell> waypoints;
  double length = 0.0;  // map units
};

struct NoPathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RrtParams {
  double step = 3.0;       // cells
  int max_iters = 5000;
  double goal_bias = 0.1;
  std::uint64_t seed = 0;
};

// RRT on the occupancy grid (traversable = value < 50), with greedy shortcut
// smoothing. Deterministic for a given seed. Throws NoPathError when the
// goal is not reached within max_iters or an endpoint is not traversable.
Path rrt_path(const world::OccupancyGrid& map, world::Cell start, world::Cell goal,
              const RrtParams& params);

// Straight segment collision check at <= half-cell sampling (used by the
// planner and by the tests to re-validate smoothed paths).
bool segment_free(const world::OccupancyGrid& map, world::Cell a, world::Cell b);

double path_length(const std::vector<world::Cell>& waypoints, double resolution);

struct Tour {
  std::vector<int> order;  // indices into the target list
  double length = 0.0;     // in metric units
};

// Open tour from `start` visiting every target exactly once: nearest-neighbor
// construction followed by 2-opt until no improving swap. `metric` holds
// distances with index 0 = start and index k+1 = target k.
Tour tsp_tour(const std::vector<std::vector<double>>& metric);
// Euclidean convenience (distances in cells).
Tour tsp_tour(world::Cell start, const std::vector<world::Cell>& targets);

}  // namespace behex::planner
