#pragma once

#include <optional>
#include <vector>

#include "behex/entropy.hpp"
#include "behex/grid.hpp"
#include "behex/rng.hpp"

namespace behex::world {

// Disk sensor. `radius` is in map units; noise_level 0 snaps sensed cells to
// ground truth, levels 1 and 2 move each cell toward the truth by an
// independent U[0,c] step (c = 35 and 15 respectively) without crossing it.
struct SensorModel {
  double radius = 2.0;
  int noise_level = 0;
};

struct Frontier {
  Cell cell;
  int cluster_id = 0;
  Cell representative;  // cluster member nearest the centroid
};

// Total Shannon map entropy: sum of H_1(value/100) over all cells.
double total_map_entropy(const OccupancyGrid& grid);

// Initial-uncertainty injection: per-quadrant additive uniform noise
// (top-left U[0,50], top-right U[0,80], bottom-right U[0,30], bottom-left
// U[0,20]); free cells move up, obstacle cells move down, both toward the
// uncertain middle. A `border` band of cells stays noise-free.
OccupancyGrid add_quadrant_noise(const OccupancyGrid& truth, std::uint64_t seed, int border = 2);

// One disk sensing pass centered at `center`; values move toward the truth
// per the sensor model and never cross it or leave [0,100].
void sense_update(OccupancyGrid& map, const OccupancyGrid& truth, Cell center,
                  const SensorModel& sensor, Rng& rng);

// Frontier cells: value < 2 with at least one 8-neighbor of strictly greater
// value and at least one 8-neighbor in the uncertain band (2, 98); clustered
// by 8-connectivity. Output order is deterministic (scan order by cluster).
std::vector<Frontier> extract_frontiers(const OccupancyGrid& map);

struct FrontierQuery {
  std::vector<Frontier> frontiers;
  double effective_radius = 0.0;
};

// Frontier cells within `radius` map units of `pos`; doubles the radius
// until non-empty or the map diagonal is reached.
FrontierQuery frontiers_in_radius(const OccupancyGrid& map, const std::vector<Frontier>& frontiers,
                                  Cell pos, double radius);

// Behavioral information gain: sum of H_alpha(value/100) over cells within
// Euclidean radius r (map units) of q.
double info_gain(const OccupancyGrid& map, Cell q, double r,
                 const entropy::BehaviorParam& params);

// All-cells shortest-path lengths (map units) from `src` through traversable
// cells (value < 50), 8-connected with diagonal cost sqrt(2)*resolution.
// Unreachable cells get +infinity.
std::vector<double> distance_field(const OccupancyGrid& map, Cell src);

// 1/eta with eta the traversable shortest-path length from x to q; falls
// back to Euclidean distance when no traversable path exists, and caps eta
// at half a cell when x == q.
double distance_utility(const OccupancyGrid& map, Cell x, Cell q);
// Same but reusing a precomputed distance_field(map, x).
double distance_utility_from_field(const OccupancyGrid& map, const std::vector<double>& field,
                                   Cell x, Cell q);

// One stochastic reward sample: per-cell occupancy perturbed by U(-delta,
// +delta) (cells already at exactly 0 or 100 stay put), behavioral entropy
// summed over the footprint, times the distance utility.
double sample_reward(const OccupancyGrid& map, Cell q, double r,
                     const entropy::BehaviorParam& params, Cell x, Rng& rng,
                     double delta = 0.05);
double sample_reward_with_phi(const OccupancyGrid& map, Cell q, double r,
                              const entropy::BehaviorParam& params, double phi, Rng& rng,
                              double delta = 0.05);

// Cells within Euclidean radius r (map units) of q, in scan order.
std::vector<Cell> footprint_cells(const OccupancyGrid& map, Cell q, double r);

}  // namespace behex::world
