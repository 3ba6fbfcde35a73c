#include "behex/world.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>

namespace behex::world {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTraversable = 50.0;
}  // namespace

double total_map_entropy(const OccupancyGrid& grid) {
  double h = 0.0;
  for (double v : grid.values()) h += entropy::shannon_entropy(v / 100.0);
  return h;
}

OccupancyGrid add_quadrant_noise(const OccupancyGrid& truth, std::uint64_t seed, int border) {
  if (!truth.is_ground_truth())
    throw std::domain_error("add_quadrant_noise: input must be a ground-truth grid");
  OccupancyGrid out = truth;
  Rng rng(seed);
  const int w = truth.width(), h = truth.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool top = y < h / 2, left = x < w / 2;
      const double cap = top ? (left ? 50.0 : 80.0) : (left ? 20.0 : 30.0);
      const double u = rng.uniform(0.0, cap);
      if (x < border || y < border || x >= w - border || y >= h - border) continue;
      const double v = truth.at(x, y);
      out.set(x, y, std::clamp(v == 0.0 ? v + u : v - u, 0.0, 100.0));
    }
  }
  return out;
}

std::vector<Cell> footprint_cells(const OccupancyGrid& map, Cell q, double r) {
  std::vector<Cell> cells;
  // Work in cell units; the tolerance keeps cells at exactly distance r
  // inside the disk despite resolution round-off.
  const double rc = r / map.resolution();
  const double r2 = rc * rc * (1.0 + 1e-12) + 1e-12;
  const int span = static_cast<int>(std::ceil(rc));
  for (int y = q.y - span; y <= q.y + span; ++y) {
    for (int x = q.x - span; x <= q.x + span; ++x) {
      if (!map.in_bounds(x, y)) continue;
      const double dx = x - q.x, dy = y - q.y;
      if (dx * dx + dy * dy <= r2) cells.push_back({x, y});
    }
  }
  return cells;
}

void sense_update(OccupancyGrid& map, const OccupancyGrid& truth, Cell center,
                  const SensorModel& sensor, Rng& rng) {
  if (!map.in_bounds(center)) throw std::domain_error("sense_update: center out of bounds");
  if (map.width() != truth.width() || map.height() != truth.height())
    throw std::domain_error("sense_update: map/truth size mismatch");
  const double step_cap = sensor.noise_level == 1 ? 35.0 : 15.0;
  for (const Cell c : footprint_cells(map, center, sensor.radius)) {
    const double t = truth.at(c);
    const double v = map.at(c);
    if (sensor.noise_level == 0) {
      map.set(c, t);
      continue;
    }
    const double u = rng.uniform(0.0, step_cap);
    double nv = v;
    if (v > t)
      nv = std::max(t, v - u);
    else if (v < t)
      nv = std::min(t, v + u);
    map.set(c, std::clamp(nv, 0.0, 100.0));
  }
}

std::vector<Frontier> extract_frontiers(const OccupancyGrid& map) {
  const int w = map.width(), h = map.height();
  std::vector<char> is_frontier(static_cast<std::size_t>(w) * h, 0);
  std::vector<Cell> cells;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!(map.at(x, y) < 2.0)) continue;
      bool greater = false, uncertain = false;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx, ny = y + dy;
          if (!map.in_bounds(nx, ny)) continue;
          const double nv = map.at(nx, ny);
          greater = greater || nv > map.at(x, y);
          uncertain = uncertain || (nv > 2.0 && nv < 98.0);
        }
      if (greater && uncertain) {
        is_frontier[static_cast<std::size_t>(y) * w + x] = 1;
        cells.push_back({x, y});
      }
    }
  }

  // Cluster by 8-connectivity, ids in scan order of the first member.
  std::vector<Frontier> out;
  std::vector<int> cluster(static_cast<std::size_t>(w) * h, -1);
  int next_id = 0;
  for (const Cell seed : cells) {
    if (cluster[static_cast<std::size_t>(seed.y) * w + seed.x] >= 0) continue;
    const int id = next_id++;
    std::vector<Cell> members;
    std::deque<Cell> q{seed};
    cluster[static_cast<std::size_t>(seed.y) * w + seed.x] = id;
    while (!q.empty()) {
      const Cell c = q.front();
      q.pop_front();
      members.push_back(c);
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = c.x + dx, ny = c.y + dy;
          if ((dx == 0 && dy == 0) || !map.in_bounds(nx, ny)) continue;
          const std::size_t id2 = static_cast<std::size_t>(ny) * w + nx;
          if (is_frontier[id2] && cluster[id2] < 0) {
            cluster[id2] = id;
            q.push_back({nx, ny});
          }
        }
    }
    std::sort(members.begin(), members.end(), [w](Cell a, Cell b) {
      return static_cast<std::size_t>(a.y) * w + a.x < static_cast<std::size_t>(b.y) * w + b.x;
    });
    double cx = 0.0, cy = 0.0;
    for (const Cell m : members) {
      cx += m.x;
      cy += m.y;
    }
    cx /= static_cast<double>(members.size());
    cy /= static_cast<double>(members.size());
    Cell rep = members.front();
    double best = kInf;
    for (const Cell m : members) {
      const double d = (m.x - cx) * (m.x - cx) + (m.y - cy) * (m.y - cy);
      if (d < best) {
        best = d;
        rep = m;
      }
    }
    for (const Cell m : members) out.push_back({m, id, rep});
  }
  return out;
}

FrontierQuery frontiers_in_radius(const OccupancyGrid& map, const std::vector<Frontier>& frontiers,
                                  Cell pos, double radius) {
  if (!(radius > 0.0)) throw std::domain_error("frontiers_in_radius: radius > 0");
  const double cap = map.diagonal();
  double r = radius;
  while (true) {
    FrontierQuery q;
    q.effective_radius = r;
    for (const Frontier& f : frontiers) {
      const double d = std::hypot(static_cast<double>(f.cell.x - pos.x),
                                  static_cast<double>(f.cell.y - pos.y)) *
                       map.resolution();
      if (d <= r) q.frontiers.push_back(f);
    }
    if (!q.frontiers.empty()) return q;
    if (r >= cap) {
      q.effective_radius = cap;
      return q;
    }
    r *= 2.0;
  }
}

double info_gain(const OccupancyGrid& map, Cell q, double r,
                 const entropy::BehaviorParam& params) {
  if (!map.in_bounds(q)) throw std::domain_error("info_gain: cell out of bounds");
  double total = 0.0;
  for (const Cell c : footprint_cells(map, q, r))
    total += entropy::behavioral_entropy(map.at(c) / 100.0, params);
  return total;
}

std::vector<double> distance_field(const OccupancyGrid& map, Cell src) {
  const int w = map.width(), h = map.height();
  std::vector<double> dist(static_cast<std::size_t>(w) * h, kInf);
  if (!map.in_bounds(src) || !(map.at(src) < kTraversable)) return dist;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const auto at = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
  dist[at(src.x, src.y)] = 0.0;
  pq.emplace(0.0, static_cast<int>(at(src.x, src.y)));
  const double res = map.resolution();
  const double diag = res * std::sqrt(2.0);
  while (!pq.empty()) {
    const auto [d, id] = pq.top();
    pq.pop();
    if (d > dist[id]) continue;
    const int x = id % w, y = id / w;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = x + dx, ny = y + dy;
        if (!map.in_bounds(nx, ny) || !(map.at(nx, ny) < kTraversable)) continue;
        const double nd = d + ((dx == 0 || dy == 0) ? res : diag);
        auto& slot = dist[at(nx, ny)];
        if (nd < slot) {
          slot = nd;
          pq.emplace(nd, static_cast<int>(at(nx, ny)));
        }
      }
  }
  return dist;
}

double distance_utility_from_field(const OccupancyGrid& map, const std::vector<double>& field,
                                   Cell x, Cell q) {
  if (!map.in_bounds(x) || !map.in_bounds(q))
    throw std::domain_error("distance_utility: cell out of bounds");
  const double cap = 0.5 * map.resolution();
  if (x == q) return 1.0 / cap;
  double eta = field[static_cast<std::size_t>(q.y) * map.width() + q.x];
  if (!std::isfinite(eta))
    eta = std::hypot(static_cast<double>(x.x - q.x), static_cast<double>(x.y - q.y)) *
          map.resolution();
  eta = std::max(eta, cap);
  return 1.0 / eta;
}

double distance_utility(const OccupancyGrid& map, Cell x, Cell q) {
  if (x == q) return 1.0 / (0.5 * map.resolution());
  return distance_utility_from_field(map, distance_field(map, x), x, q);
}

double sample_reward_with_phi(const OccupancyGrid& map, Cell q, double r,
                              const entropy::BehaviorParam& params, double phi, Rng& rng,
                              double delta) {
  double nu = 0.0;
  for (const Cell c : footprint_cells(map, q, r)) {
    const double p = map.at(c) / 100.0;
    double ph = p;
    if (p != 0.0 && p != 1.0 && delta > 0.0)
      ph = std::clamp(p + rng.uniform(-delta, delta), 0.0, 1.0);
    nu += entropy::behavioral_entropy(ph, params);
  }
  return nu * phi;
}

double sample_reward(const OccupancyGrid& map, Cell q, double r,
                     const entropy::BehaviorParam& params, Cell x, Rng& rng, double delta) {
  return sample_reward_with_phi(map, q, r, params, distance_utility(map, x, q), rng, delta);
}

}  // namespace behex::world
