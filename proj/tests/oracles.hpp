#pragma once

// Test-only oracles, kept independent of the library implementations they
// cross-check. Everything here prefers brute force over cleverness.

#include <functional>
#include <vector>

#include "behex/allocation.hpp"
#include "behex/grid.hpp"

namespace oracles {

// Dense-tableau simplex for small LPs: maximize c.x subject to A_eq x = b_eq,
// A_ub x <= b_ub, x >= 0. Returns the optimum value; throws on infeasible or
// unbounded problems. Bland's rule, so it always terminates.
double simplex_max(const std::vector<double>& c,
                   const std::vector<std::vector<double>>& a_eq, const std::vector<double>& b_eq,
                   const std::vector<std::vector<double>>& a_ub, const std::vector<double>& b_ub);

// Worst-case means over a 1-Wasserstein ball, as a transport-plan LP onto a
// discretized support grid (grid_points columns). The atoms each carry mass
// 1/n; the plan cost is constrained by eps.
double lp_sup_mean(const std::vector<double>& atoms, double lo, double hi, double eps,
                   int grid_points);
double lp_inf_mean(const std::vector<double>& atoms, double lo, double hi, double eps,
                   int grid_points);

// Exhaustive search over all agent^task assignments honoring availability;
// ties resolved toward the lexicographically smallest owner vector.
behex::allocation::Partition enumerate_best_partition(
    const behex::allocation::RewardTable& rewards);

// Shannon binary entropy, written independently of the library.
double shannon(double p);

// 4/8-connected Dijkstra over traversable cells (< 50), axial cost
// `resolution`, diagonal cost sqrt(2) * resolution.
double grid_shortest_path(const behex::world::OccupancyGrid& map, behex::world::Cell a,
                          behex::world::Cell b);

// Brute-force optimal open tour for <= 9 targets (start fixed).
double brute_force_tour_length(const std::vector<std::vector<double>>& metric);

// Expected entropy of a clamped uniformly-perturbed occupancy probability,
// by composite Simpson quadrature: E[H_alpha(clamp01(p + U(-delta, delta)))].
double expected_perturbed_entropy(double p, double alpha, double delta, int panels = 4096);

}  // namespace oracles
