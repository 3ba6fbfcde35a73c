#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

namespace behex::comms {

using Arc = std::pair<int, int>;  // (from, to): `from` can send to `to`

// Time-varying directed communication graph. `tau` is the claimed
// connectivity period: the union of arcs over each window (k*tau, (k+1)*tau]
// must be strongly connected (validate_assumption checks this).
struct GraphSequence {
  int n = 0;
  int tau = 1;
  std::function<std::vector<Arc>(int t)> arcs_at;

  std::vector<Arc> arcs(int t) const { return arcs_at ? arcs_at(t) : std::vector<Arc>{}; }
};

// In-neighbors {j | (j,i) in E(t)}; the closed variant adds i itself.
std::set<int> neighbors_in(const GraphSequence& seq, int i, int t);
std::set<int> closed_neighbors_in(const GraphSequence& seq, int i, int t);

// Dense in-neighbor lists (closed) for one time step; the allocation
// dynamics consume these.
std::vector<std::vector<int>> closed_in_neighbors(const GraphSequence& seq, int t);

struct ValidationResult {
  bool valid = true;
  int first_failing_window = -1;
};

// Checks periodic joint strong connectivity over windows (k*tau, (k+1)*tau]
// for all windows fully inside [1, horizon].
ValidationResult validate_assumption(const GraphSequence& seq, int horizon);

// Union graph over a window of time steps (t_begin, t_end].
std::vector<Arc> union_arcs(const GraphSequence& seq, int t_begin, int t_end);

bool strongly_connected(int n, const std::vector<Arc>& arcs);

// Longest shortest-path length over ordered node pairs; throws if the graph
// is not strongly connected. A single node has diameter 0.
int diameter(int n, const std::vector<Arc>& arcs);

// Symmetric arcs between points within `radius` (Euclidean).
std::vector<Arc> proximity_graph(const std::vector<std::pair<double, double>>& positions,
                                 double radius);

// Built-in generators.
GraphSequence static_complete(int n, int tau = 1);
GraphSequence static_ring(int n, int tau = 1);
// Ring arcs active only at steps t = phase (mod period); claimed tau = period.
GraphSequence pulsed_ring(int n, int period, int phase = 1);
// Complete arcs active only at steps t = phase (mod period).
GraphSequence pulsed_complete(int n, int period, int phase = 1);
GraphSequence proximity_sequence(const std::vector<std::pair<double, double>>& positions,
                                 double radius, int tau = 1);
// Per-step random arcs (probability p per ordered pair) plus a rotating
// batch of spanning-cycle arcs sized so every tau-window contains the whole
// cycle; Assumption-valid by construction with the given tau.
GraphSequence random_patched(int n, double arc_prob, int tau, std::uint64_t seed);
// Static symmetric graph from a set of undirected edges plus the rotating
// spanning-cycle patch (used for shared-frontier allocation graphs).
GraphSequence patched_static(int n, const std::vector<Arc>& base_arcs, int tau);

}  // namespace behex::comms
