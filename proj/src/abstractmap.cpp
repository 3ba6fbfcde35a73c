#include "behex/abstractmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "behex/entropy.hpp"

namespace behex::abstractmap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

AbstractWorld AbstractWorld::make(std::vector<double> eta, std::vector<double> belief,
                                  std::vector<int> truth, double lambda) {
  AbstractWorld w;
  w.n_cells = static_cast<int>(belief.size());
  if (truth.size() != belief.size()) throw std::domain_error("AbstractWorld: truth/belief size");
  if (eta.size() != belief.size() * belief.size())
    throw std::domain_error("AbstractWorld: eta must be n x n");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::domain_error("AbstractWorld: lambda in [0,1)");
  for (int i = 0; i < w.n_cells; ++i)
    for (int j = 0; j < w.n_cells; ++j) {
      const double e = eta[static_cast<std::size_t>(i) * w.n_cells + j];
      if (i != j && !(e > 0.0)) throw std::domain_error("AbstractWorld: eta > 0 off-diagonal");
      if (std::abs(e - eta[static_cast<std::size_t>(j) * w.n_cells + i]) > 1e-12)
        throw std::domain_error("AbstractWorld: eta must be symmetric");
    }
  for (int k = 0; k < w.n_cells; ++k) {
    if (!(belief[k] >= 0.0 && belief[k] <= 1.0))
      throw std::domain_error("AbstractWorld: beliefs in [0,1]");
    if (truth[k] != 0 && truth[k] != 1) throw std::domain_error("AbstractWorld: truth in {0,1}");
  }
  w.eta = std::move(eta);
  w.belief = std::move(belief);
  w.truth = std::move(truth);
  w.lambda = lambda;
  w.hypothesis_at_t0 = true;
  for (int k = 0; k < w.n_cells; ++k)
    if (!(std::abs(w.belief[k] - w.truth[k]) < 0.5)) w.hypothesis_at_t0 = false;
  return w;
}

double AbstractWorld::d_max() const {
  double mx = 0.0, mn = kInf;
  for (int i = 0; i < n_cells; ++i)
    for (int j = 0; j < n_cells; ++j) {
      if (i == j) continue;
      mx = std::max(mx, eta_at(i, j));
      mn = std::min(mn, eta_at(i, j));
    }
  return mx / mn;
}

double AbstractWorld::d_min() const { return 1.0 / d_max(); }

namespace {
double cell_value(const AbstractWorld& w, double alpha, int from, int k) {
  return entropy::behavioral_entropy(w.belief[k], entropy::BehaviorParam::from_alpha(alpha)) /
         w.eta_at(from, k);
}

// Exact max-total assignment over distinct cells. Each agent only ever needs
// its top (n_agents + 1) candidates: anything deeper can be swapped for an
// unused better cell.
std::vector<int> resolve_conflicts(const AbstractWorld& w, const AgentConfig& agents) {
  const int na = static_cast<int>(agents.alpha.size());
  std::vector<std::vector<int>> cand(na);
  for (int i = 0; i < na; ++i) {
    std::vector<std::pair<double, int>> scored;
    for (int k = 0; k < w.n_cells; ++k) {
      if (k == agents.pos[i]) continue;
      scored.emplace_back(cell_value(w, agents.alpha[i], agents.pos[i], k), -k);
    }
    std::sort(scored.begin(), scored.end(), std::greater<>());
    const int keep = std::min<int>(na + 1, static_cast<int>(scored.size()));
    for (int s = 0; s < keep; ++s) cand[i].push_back(-scored[s].second);
  }
  std::vector<int> pick(na, -1), best_pick;
  double best_total = -kInf;
  auto rec = [&](auto&& self, int i, double total) -> void {
    if (i == na) {
      if (total > best_total) {
        best_total = total;
        best_pick = pick;
      }
      return;
    }
    for (int k : cand[i]) {
      bool taken = false;
      for (int j = 0; j < i && !taken; ++j) taken = pick[j] == k;
      if (taken) continue;
      pick[i] = k;
      self(self, i + 1, total + cell_value(w, agents.alpha[i], agents.pos[i], k));
      pick[i] = -1;
    }
  };
  rec(rec, 0, 0.0);
  if (best_pick.empty()) throw std::runtime_error("assign_step: no feasible distinct assignment");
  return best_pick;
}
}  // namespace

AssignResult assign_step(const AbstractWorld& world, const AgentConfig& agents) {
  const int na = static_cast<int>(agents.alpha.size());
  if (na == 0) throw std::domain_error("assign_step: no agents");
  if (world.n_cells < na) throw std::domain_error("assign_step: fewer cells than agents");
  AssignResult res;
  res.raw_argmax.resize(na);
  for (int i = 0; i < na; ++i) {
    int best = -1;
    double bv = -kInf;
    for (int k = 0; k < world.n_cells; ++k) {
      if (k == agents.pos[i]) continue;
      const double v = cell_value(world, agents.alpha[i], agents.pos[i], k);
      if (v > bv) {
        bv = v;
        best = k;
      }
    }
    if (best < 0) throw std::domain_error("assign_step: agent has no candidate cell");
    res.raw_argmax[i] = best;
  }
  std::vector<int> sorted = res.raw_argmax;
  std::sort(sorted.begin(), sorted.end());
  res.raw_collision = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
  res.positions = res.raw_collision ? resolve_conflicts(world, agents) : res.raw_argmax;
  return res;
}

std::vector<double> belief_step_noisy(const AbstractWorld& world, const std::vector<int>& visited,
                                      double lambda_step) {
  std::vector<double> next = world.belief;
  for (int k : visited) {
    if (k < 0 || k >= world.n_cells) throw std::domain_error("belief_step: bad cell");
    const double truth = static_cast<double>(world.truth[k]);
    next[k] = truth + lambda_step * (world.belief[k] - truth);
  }
  return next;
}

std::vector<double> belief_step(const AbstractWorld& world, const std::vector<int>& visited) {
  return belief_step_noisy(world, visited, world.lambda);
}

double entropy_decrease_bound(const std::vector<double>& belief_before,
                              const std::vector<int>& truth, const std::vector<int>& visited,
                              double lambda, int t) {
  double bound = 0.0;
  for (int k : visited) {
    const double p = belief_before[k];
    if (p == 0.0 || p == 1.0) return -kInf;
    const double slope = std::log(1.0 - p) - std::log(p);
    bound += slope * (0.5 * std::pow(lambda, t) - (p - static_cast<double>(truth[k])));
  }
  return bound;
}

namespace {
double scaled_gap(double p, double alpha_i, double alpha_j, double ci, double cj) {
  return ci * entropy::behavioral_entropy(p, entropy::BehaviorParam::from_alpha(alpha_i)) -
         cj * entropy::behavioral_entropy(p, entropy::BehaviorParam::from_alpha(alpha_j));
}
}  // namespace

double compute_pbar(double alpha_i, double alpha_j, double d_m, double d_max) {
  if (alpha_i == alpha_j) throw std::domain_error("compute_pbar: alphas must differ");
  if (!(d_m > 0.0 && d_m <= d_max)) throw std::domain_error("compute_pbar: need 0 < d_m <= d_M");
  constexpr int kGrid = 10000;
  const double scale = std::max(1.0, d_max);
  double best = kInf;

  for (int variant = 0; variant < 2; ++variant) {
    const double ci = variant == 0 ? d_max : d_m;
    const double cj = variant == 0 ? d_m : d_max;
    auto g = [&](double p) { return scaled_gap(p, alpha_i, alpha_j, ci, cj); };

    double prev_p = 0.0, prev_v = 0.0;
    bool have_prev = false;
    std::vector<double> vals(kGrid - 1);
    for (int k = 1; k < kGrid; ++k) vals[k - 1] = g(static_cast<double>(k) / kGrid);
    for (int k = 1; k < kGrid; ++k) {
      const double p = static_cast<double>(k) / kGrid;
      const double v = vals[k - 1];
      if (std::abs(v) <= 1e-12 * scale) {
        best = std::min(best, p);
      } else if (have_prev && prev_v * v < 0.0) {
        double lo = prev_p, hi = p, flo = prev_v;
        for (int it = 0; it < 100 && hi - lo > 1e-10; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = g(mid);
          if (flo * fm <= 0.0)
            hi = mid;
          else {
            lo = mid;
            flo = fm;
          }
        }
        best = std::min(best, 0.5 * (lo + hi));
      }
      prev_p = p;
      prev_v = v;
      have_prev = true;
    }
    // Tangent roots: local minima of |g| that refine to ~zero.
    for (int k = 2; k < kGrid - 1; ++k) {
      const double a = std::abs(vals[k - 2]), b = std::abs(vals[k - 1]), c = std::abs(vals[k]);
      if (b <= a && b <= c && b < 1e-5 * scale) {
        double lo = static_cast<double>(k - 1) / kGrid, hi = static_cast<double>(k + 1) / kGrid;
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
          const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
          if (std::abs(g(m1)) < std::abs(g(m2)))
            hi = m2;
          else
            lo = m1;
        }
        const double p = 0.5 * (lo + hi);
        if (std::abs(g(p)) < 1e-8 * scale) best = std::min(best, p);
      }
    }
  }
  if (!std::isfinite(best))
    throw std::runtime_error("compute_pbar: no crossing found in (0,1)");
  return best;
}

double compute_pbar_team(const std::vector<double>& alphas, double d_m, double d_max) {
  const int n = static_cast<int>(alphas.size());
  if (n < 2) throw std::domain_error("compute_pbar_team: need at least two agents");
  double best = kInf;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      best = std::min(best, compute_pbar(alphas[i], alphas[j], d_m, d_max));
  return best;
}

std::string AbstractTrace::to_csv() const {
  std::ostringstream os;
  os << "step,agent,cell,entropy,bound\n";
  char buf[64];
  for (const StepRecord& r : steps) {
    for (std::size_t a = 0; a < r.positions.size(); ++a) {
      os << r.step << ',' << a << ',' << r.positions[a] << ',';
      std::snprintf(buf, sizeof buf, "%.17g", r.entropy);
      os << buf << ',';
      std::snprintf(buf, sizeof buf, "%.17g", r.bound);
      os << buf << '\n';
    }
  }
  return os.str();
}

AbstractTrace run_abstract(AbstractWorld world, AgentConfig agents, int steps) {
  AbstractTrace trace;
  double h = 0.0;
  for (double p : world.belief) h += entropy::shannon_entropy(p);
  trace.initial_entropy = h;
  for (int t = 0; t < steps; ++t) {
    const AssignResult assign = assign_step(world, agents);
    std::vector<int> visited = assign.positions;
    std::sort(visited.begin(), visited.end());
    visited.erase(std::unique(visited.begin(), visited.end()), visited.end());

    StepRecord rec;
    rec.step = t;
    rec.positions = assign.positions;
    rec.raw_collision = assign.raw_collision;
    rec.distinct_positions =
        static_cast<int>(visited.size()) == static_cast<int>(assign.positions.size());
    rec.bound = entropy_decrease_bound(world.belief, world.truth, visited, world.lambda, t);
    rec.bound_sentinel = std::isinf(rec.bound);

    const std::vector<double> next = belief_step(world, visited);
    double h_next = h;
    for (int k : visited)
      h_next += entropy::shannon_entropy(next[k]) - entropy::shannon_entropy(world.belief[k]);
    rec.realized_delta = h_next - h;
    rec.entropy = h_next;
    if (rec.bound_sentinel) {
      rec.lemma_violation = rec.realized_delta > 1e-12;
    } else {
      rec.lemma_violation = rec.realized_delta > rec.bound + 1e-12;
      rec.bound_nonnegative = rec.bound >= 0.0;
    }
    if (!rec.distinct_positions) ++trace.distinctness_violations;
    if (rec.lemma_violation) ++trace.lemma_violations;
    if (rec.raw_collision) ++trace.raw_collisions;
    trace.steps.push_back(rec);

    world.belief = next;
    agents.pos = assign.positions;
    h = h_next;
  }
  return trace;
}

}  // namespace behex::abstractmap
