#include "behex/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "behex/rng.hpp"

namespace behex::planner {

using world::Cell;
using world::OccupancyGrid;

namespace {
constexpr double kTraversable = 50.0;

struct Pt {
  double x, y;
};

bool point_free(const OccupancyGrid& map, double x, double y) {
  const int cx = static_cast<int>(std::lround(x));
  const int cy = static_cast<int>(std::lround(y));
  return map.in_bounds(cx, cy) && map.at(cx, cy) < kTraversable;
}

bool segment_free_pts(const OccupancyGrid& map, Pt a, Pt b) {
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.5)));
  for (int s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    if (!point_free(map, a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))) return false;
  }
  return true;
}
}  // namespace

bool segment_free(const OccupancyGrid& map, Cell a, Cell b) {
  return segment_free_pts(map, {static_cast<double>(a.x), static_cast<double>(a.y)},
                          {static_cast<double>(b.x), static_cast<double>(b.y)});
}

double path_length(const std::vector<Cell>& waypoints, double resolution) {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i)
    total += std::hypot(static_cast<double>(waypoints[i].x - waypoints[i - 1].x),
                        static_cast<double>(waypoints[i].y - waypoints[i - 1].y));
  return total * resolution;
}

Path rrt_path(const OccupancyGrid& map, Cell start, Cell goal, const RrtParams& params) {
  if (!map.in_bounds(start) || !map.in_bounds(goal))
    throw NoPathError("rrt_path: endpoint out of bounds");
  if (!(map.at(start) < kTraversable)) throw NoPathError("rrt_path: start not traversable");
  if (!(map.at(goal) < kTraversable)) throw NoPathError("rrt_path: goal not traversable");
  if (start == goal) return {{start}, 0.0};

  const Pt pstart{static_cast<double>(start.x), static_cast<double>(start.y)};
  const Pt pgoal{static_cast<double>(goal.x), static_cast<double>(goal.y)};
  std::vector<Pt> nodes{pstart};
  std::vector<int> parent{-1};
  Rng rng(params.seed);
  int goal_node = -1;

  for (int it = 0; it < params.max_iters && goal_node < 0; ++it) {
    const Pt target = (rng.uniform() < params.goal_bias)
                          ? pgoal
                          : Pt{rng.uniform(0.0, static_cast<double>(map.width())),
                               rng.uniform(0.0, static_cast<double>(map.height()))};
    int nearest = 0;
    double best = std::hypot(nodes[0].x - target.x, nodes[0].y - target.y);
    for (int i = 1; i < static_cast<int>(nodes.size()); ++i) {
      const double d = std::hypot(nodes[i].x - target.x, nodes[i].y - target.y);
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
    Pt next = target;
    if (best > params.step) {
      const double s = params.step / best;
      next = {nodes[nearest].x + s * (target.x - nodes[nearest].x),
              nodes[nearest].y + s * (target.y - nodes[nearest].y)};
    }
    if (!point_free(map, next.x, next.y)) continue;
    if (!segment_free_pts(map, nodes[nearest], next)) continue;
    nodes.push_back(next);
    parent.push_back(nearest);
    const int id = static_cast<int>(nodes.size()) - 1;
    if (std::hypot(next.x - pgoal.x, next.y - pgoal.y) <= params.step &&
        segment_free_pts(map, next, pgoal)) {
      nodes.push_back(pgoal);
      parent.push_back(id);
      goal_node = id + 1;
    }
  }
  if (goal_node < 0) throw NoPathError("rrt_path: goal not reached within max_iters");

  std::vector<Pt> raw;
  for (int v = goal_node; v >= 0; v = parent[v]) raw.push_back(nodes[v]);
  std::reverse(raw.begin(), raw.end());

  // Densify onto traversable cells so the smoothing below can validate
  // straight segments in cell space (which is what Path promises).
  std::vector<Cell> cells{start};
  for (std::size_t s = 1; s < raw.size(); ++s) {
    const Pt a = raw[s - 1], b = raw[s];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.4)));
    for (int k = 1; k <= steps; ++k) {
      const double t = static_cast<double>(k) / steps;
      const Cell c{static_cast<int>(std::lround(a.x + t * (b.x - a.x))),
                   static_cast<int>(std::lround(a.y + t * (b.y - a.y)))};
      if (!(cells.back() == c)) cells.push_back(c);
    }
  }
  if (!(cells.back() == goal)) cells.push_back(goal);

  // Greedy shortcut: from each kept cell jump to the farthest visible one.
  Path path;
  path.waypoints.push_back(cells.front());
  std::size_t i = 0;
  while (i + 1 < cells.size()) {
    std::size_t j = cells.size() - 1;
    while (j > i + 1 && !segment_free(map, cells[i], cells[j])) --j;
    path.waypoints.push_back(cells[j]);
    i = j;
  }
  path.length = path_length(path.waypoints, map.resolution());
  return path;
}

namespace {
double open_tour_length(const std::vector<std::vector<double>>& metric,
                        const std::vector<int>& order) {
  double len = metric[0][order[0] + 1];
  for (std::size_t i = 1; i < order.size(); ++i) len += metric[order[i - 1] + 1][order[i] + 1];
  return len;
}

// Held-Karp over (visited subset, last target). Exact, and cheap for the
// buffer sizes the simulator produces.
Tour exact_open_tour(const std::vector<std::vector<double>>& metric, int n) {
  const int full = 1 << n;
  constexpr double kBig = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(full, std::vector<double>(n, kBig));
  std::vector<std::vector<int>> prev(full, std::vector<int>(n, -1));
  for (int k = 0; k < n; ++k) cost[1 << k][k] = metric[0][k + 1];
  for (int mask = 1; mask < full; ++mask)
    for (int last = 0; last < n; ++last) {
      if (!(mask & (1 << last)) || cost[mask][last] == kBig) continue;
      for (int nxt = 0; nxt < n; ++nxt) {
        if (mask & (1 << nxt)) continue;
        const int m2 = mask | (1 << nxt);
        const double c2 = cost[mask][last] + metric[last + 1][nxt + 1];
        if (c2 < cost[m2][nxt]) {
          cost[m2][nxt] = c2;
          prev[m2][nxt] = last;
        }
      }
    }
  int last = 0;
  for (int k = 1; k < n; ++k)
    if (cost[full - 1][k] < cost[full - 1][last]) last = k;
  std::vector<int> order;
  int mask = full - 1;
  while (last >= 0) {
    order.push_back(last);
    const int p = prev[mask][last];
    mask &= ~(1 << last);
    last = p;
  }
  std::reverse(order.begin(), order.end());
  return {order, cost[full - 1][order.back()]};
}
}  // namespace

Tour tsp_tour(const std::vector<std::vector<double>>& metric) {
  const int n = static_cast<int>(metric.size()) - 1;  // targets
  if (n < 1) throw std::domain_error("tsp_tour: at least one target");
  // Open fixed-start 2-opt alone can land 20%+ above the optimum, which
  // breaks the quality contract; solve small instances exactly instead.
  if (n <= 13) return exact_open_tour(metric, n);

  std::vector<int> order;
  std::vector<char> used(n, 0);
  int cur = 0;  // metric index of start
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    double best = 0.0;
    for (int k = 0; k < n; ++k) {
      if (used[k]) continue;
      const double d = metric[cur][k + 1];
      if (pick < 0 || d < best) {
        best = d;
        pick = k;
      }
    }
    used[pick] = 1;
    order.push_back(pick);
    cur = pick + 1;
  }

  // 2-opt on the open tour: reverse [i, j] while it improves.
  bool improved = true;
  double len = open_tour_length(metric, order);
  while (improved) {
    improved = false;
    for (int i = 0; i < n - 1 && !improved; ++i) {
      for (int j = i + 1; j < n && !improved; ++j) {
        std::vector<int> cand = order;
        std::reverse(cand.begin() + i, cand.begin() + j + 1);
        const double cl = open_tour_length(metric, cand);
        if (cl + 1e-12 < len) {
          order = std::move(cand);
          len = cl;
          improved = true;
        }
      }
    }
  }
  return {order, len};
}

Tour tsp_tour(Cell start, const std::vector<Cell>& targets) {
  const int n = static_cast<int>(targets.size());
  std::vector<std::vector<double>> metric(n + 1, std::vector<double>(n + 1, 0.0));
  auto pt = [&](int idx) -> Cell { return idx == 0 ? start : targets[idx - 1]; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      metric[i][j] = std::hypot(static_cast<double>(pt(i).x - pt(j).x),
                                static_cast<double>(pt(i).y - pt(j).y));
  return tsp_tour(metric);
}

}  // namespace behex::planner
