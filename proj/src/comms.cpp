#include "behex/comms.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "behex/rng.hpp"

namespace behex::comms {

std::set<int> neighbors_in(const GraphSequence& seq, int i, int t) {
  if (i < 0 || i >= seq.n) throw std::domain_error("neighbors_in: bad agent id");
  std::set<int> out;
  for (const auto& [from, to] : seq.arcs(t))
    if (to == i) out.insert(from);
  return out;
}

std::set<int> closed_neighbors_in(const GraphSequence& seq, int i, int t) {
  auto out = neighbors_in(seq, i, t);
  out.insert(i);
  return out;
}

std::vector<std::vector<int>> closed_in_neighbors(const GraphSequence& seq, int t) {
  std::vector<std::vector<int>> nin(seq.n);
  for (int i = 0; i < seq.n; ++i) nin[i].push_back(i);
  for (const auto& [from, to] : seq.arcs(t))
    if (from != to && to >= 0 && to < seq.n) nin[to].push_back(from);
  return nin;
}

std::vector<Arc> union_arcs(const GraphSequence& seq, int t_begin, int t_end) {
  std::set<Arc> acc;
  for (int t = t_begin + 1; t <= t_end; ++t)
    for (const auto& a : seq.arcs(t)) acc.insert(a);
  return {acc.begin(), acc.end()};
}

namespace {
std::vector<int> bfs_dist(int n, const std::vector<std::vector<int>>& adj, int src) {
  std::vector<int> dist(n, -1);
  std::deque<int> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
  }
  return dist;
}

std::vector<std::vector<int>> out_adjacency(int n, const std::vector<Arc>& arcs) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [from, to] : arcs)
    if (from >= 0 && from < n && to >= 0 && to < n && from != to) adj[from].push_back(to);
  return adj;
}
}  // namespace

bool strongly_connected(int n, const std::vector<Arc>& arcs) {
  if (n <= 1) return true;
  const auto adj = out_adjacency(n, arcs);
  for (int s = 0; s < n; ++s) {
    const auto d = bfs_dist(n, adj, s);
    for (int v = 0; v < n; ++v)
      if (d[v] < 0) return false;
  }
  return true;
}

ValidationResult validate_assumption(const GraphSequence& seq, int horizon) {
  if (seq.tau < 1) throw std::domain_error("validate_assumption: tau >= 1");
  if (horizon < seq.tau) throw std::domain_error("validate_assumption: horizon >= tau");
  for (int k = 0; (k + 1) * seq.tau <= horizon; ++k) {
    const auto u = union_arcs(seq, k * seq.tau, (k + 1) * seq.tau);
    if (!strongly_connected(seq.n, u)) return {false, k};
  }
  return {true, -1};
}

int diameter(int n, const std::vector<Arc>& arcs) {
  if (n <= 1) return 0;
  const auto adj = out_adjacency(n, arcs);
  int diam = 0;
  for (int s = 0; s < n; ++s) {
    const auto d = bfs_dist(n, adj, s);
    for (int v = 0; v < n; ++v) {
      if (d[v] < 0) throw std::runtime_error("diameter: graph not strongly connected");
      diam = std::max(diam, d[v]);
    }
  }
  return diam;
}

std::vector<Arc> proximity_graph(const std::vector<std::pair<double, double>>& positions,
                                 double radius) {
  if (!(radius > 0.0)) throw std::domain_error("proximity_graph: radius > 0");
  std::vector<Arc> arcs;
  const int n = static_cast<int>(positions.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dx = positions[i].first - positions[j].first;
      const double dy = positions[i].second - positions[j].second;
      if (std::hypot(dx, dy) <= radius) {
        arcs.emplace_back(i, j);
        arcs.emplace_back(j, i);
      }
    }
  return arcs;
}

GraphSequence static_complete(int n, int tau) {
  std::vector<Arc> arcs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) arcs.emplace_back(i, j);
  return {n, tau, [arcs](int) { return arcs; }};
}

GraphSequence static_ring(int n, int tau) {
  std::vector<Arc> arcs;
  for (int i = 0; i < n; ++i) arcs.emplace_back(i, (i + 1) % n);
  return {n, tau, [arcs](int) { return arcs; }};
}

GraphSequence pulsed_ring(int n, int period, int phase) {
  std::vector<Arc> arcs;
  for (int i = 0; i < n; ++i) arcs.emplace_back(i, (i + 1) % n);
  return {n, period, [arcs, period, phase](int t) {
            return (((t % period) + period) % period == phase % period) ? arcs
                                                                        : std::vector<Arc>{};
          }};
}

GraphSequence pulsed_complete(int n, int period, int phase) {
  std::vector<Arc> arcs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) arcs.emplace_back(i, j);
  return {n, period, [arcs, period, phase](int t) {
            return (((t % period) + period) % period == phase % period) ? arcs
                                                                        : std::vector<Arc>{};
          }};
}

GraphSequence proximity_sequence(const std::vector<std::pair<double, double>>& positions,
                                 double radius, int tau) {
  auto arcs = proximity_graph(positions, radius);
  return {static_cast<int>(positions.size()), tau, [arcs](int) { return arcs; }};
}

namespace {
// Rotating batch of cycle arcs: at window offset o, arcs {a -> a+1 : a = o
// (mod tau)}. Every tau-window then contains the full spanning cycle.
std::vector<Arc> rotating_patch(int n, int tau, int t) {
  std::vector<Arc> out;
  const int offset = ((t % tau) + tau) % tau;
  for (int a = offset; a < n; a += tau) out.emplace_back(a, (a + 1) % n);
  return out;
}
}  // namespace

GraphSequence random_patched(int n, double arc_prob, int tau, std::uint64_t seed) {
  return {n, tau, [n, arc_prob, tau, seed](int t) {
            Rng rng(Rng::mix(seed, {static_cast<std::uint64_t>(t)}));
            std::vector<Arc> arcs;
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                if (i != j && rng.uniform() < arc_prob) arcs.emplace_back(i, j);
            for (const auto& a : rotating_patch(n, tau, t)) arcs.push_back(a);
            return arcs;
          }};
}

GraphSequence patched_static(int n, const std::vector<Arc>& base_arcs, int tau) {
  return {n, tau, [n, base_arcs, tau](int t) {
            auto arcs = base_arcs;
            for (const auto& a : rotating_patch(n, tau, t)) arcs.push_back(a);
            return arcs;
          }};
}

}  // namespace behex::comms
