#include "behex/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace behex::allocation {

RewardTable RewardTable::full(const std::vector<std::vector<double>>& rewards) {
  RewardTable t;
  t.n_agents = static_cast<int>(rewards.size());
  t.n_tasks = t.n_agents > 0 ? static_cast<int>(rewards[0].size()) : 0;
  t.available.assign(t.n_agents, std::vector<bool>(t.n_tasks, true));
  t.rho = rewards;
  return t;
}

RewardTable RewardTable::empty(int agents, int tasks) {
  RewardTable t;
  t.n_agents = agents;
  t.n_tasks = tasks;
  t.available.assign(agents, std::vector<bool>(tasks, false));
  t.rho.assign(agents, std::vector<double>(tasks, 0.0));
  return t;
}

void RewardTable::set(int agent, int task, double reward) {
  available.at(agent).at(task) = true;
  rho.at(agent).at(task) = reward;
}

double RewardTable::reward(int agent, int task) const {
  if (!available.at(agent).at(task))
    throw std::domain_error("RewardTable: task not available to agent");
  return rho[agent][task];
}

void RewardTable::validate() const {
  for (int q = 0; q < n_tasks; ++q) {
    bool covered = false;
    for (int i = 0; i < n_agents && !covered; ++i) covered = available[i][q];
    if (!covered) throw std::domain_error("RewardTable: task with no available agent");
  }
  for (int i = 0; i < n_agents; ++i)
    for (int q = 0; q < n_tasks; ++q)
      if (available[i][q] && !std::isfinite(rho[i][q]))
        throw std::domain_error("RewardTable: non-finite reward");
}

double clamp_unit(double x) { return std::max(0.0, std::min(x, 1.0)); }

std::set<int> dominating_agents(const RewardTable& rewards, int task) {
  if (task < 0 || task >= rewards.n_tasks) throw std::domain_error("dominating_agents: unknown task");
  double best = -kInfinity;
  for (int i = 0; i < rewards.n_agents; ++i)
    if (rewards.available[i][task]) best = std::max(best, rewards.rho[i][task]);
  std::set<int> out;
  for (int i = 0; i < rewards.n_agents; ++i)
    if (rewards.available[i][task] && rewards.rho[i][task] == best) out.insert(i);
  if (out.empty()) throw std::domain_error("dominating_agents: task has no holder");
  return out;
}

Partition brute_force_partition(const RewardTable& rewards) {
  rewards.validate();
  Partition p;
  p.owner.assign(rewards.n_tasks, -1);
  for (int q = 0; q < rewards.n_tasks; ++q) p.owner[q] = *dominating_agents(rewards, q).begin();
  return p;
}

double game_utility(int agent, const std::vector<std::vector<double>>& w,
                    const RewardTable& rewards) {
  double u = 0.0;
  for (int q = 0; q < rewards.n_tasks; ++q) {
    if (!rewards.available[agent][q]) continue;
    double competitor = 0.0;
    bool any = false;
    for (int j = 0; j < rewards.n_agents; ++j) {
      if (j == agent || !rewards.available[j][q]) continue;
      const double v = rewards.rho[j][q] * w[j][q];
      if (!any || v > competitor) competitor = v;
      any = true;
    }
    if (!any) competitor = 0.0;
    u += rewards.rho[agent][q] * w[agent][q] - competitor * w[agent][q];
  }
  return u;
}

double switch_fn(double m, double f, int t, int T) {
  if (T < 1) throw std::domain_error("switch_fn: T >= 1");
  return (t % T == 0) ? f : m;
}

void StepSchedule::validate() const {
  if (tau < 1) throw std::domain_error("StepSchedule: tau >= 1");
  if (T <= 2 * tau + 1) throw std::domain_error("StepSchedule: requires T > 2*tau + 1");
}

double step_size(int t, const StepSchedule& schedule) {
  schedule.validate();
  const int k = t / schedule.T;
  const int offset = t - k * schedule.T;
  return (offset <= 2 * schedule.tau - 1) ? schedule.alpha(k) : schedule.beta(k);
}

AllocationState AllocationState::init(const RewardTable& availability,
                                      const std::function<double(int, int, int)>& estimate,
                                      double w0) {
  AllocationState st;
  const int n = availability.n_agents, m = availability.n_tasks;
  st.w.assign(n, std::vector<double>(m, 0.0));
  st.M.assign(n, std::vector<double>(m, -kInfinity));
  st.S.assign(n, std::vector<double>(m, -kInfinity));
  st.e.assign(n, std::vector<double>(m, -kInfinity));
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < m; ++q)
      if (availability.available[i][q]) {
        const double z0 = estimate(i, q, 0);
        st.w[i][q] = clamp_unit(w0);
        st.M[i][q] = z0;
        st.S[i][q] = z0;
        st.e[i][q] = z0;
      }
  return st;
}

namespace {
// submax over a multiset: largest value strictly below the max; when every
// value equals the max (degenerate set), submax = max.
double submax_of(const std::vector<double>& vals) {
  double m = -kInfinity;
  for (double v : vals) m = std::max(m, v);
  double s = -kInfinity;
  for (double v : vals)
    if (v != m) s = std::max(s, v);
  return std::isinf(s) ? m : s;
}
}  // namespace

AllocationState dpbrag_step(const AllocationState& state, const RewardTable& availability,
                            const EstimateFn& estimate, const comms::GraphSequence& graph,
                            const StepSchedule& schedule) {
  const int n = availability.n_agents, m = availability.n_tasks;
  const int t = state.t;
  const int tn = t + 1;
  const bool inject = (tn % schedule.T == 0);
  const double gamma = step_size(t, schedule);
  const auto nin = comms::closed_in_neighbors(graph, tn);

  AllocationState next = state;
  next.t = tn;
  std::vector<double> pool;
  for (int i = 0; i < n; ++i) {
    for (int q = 0; q < m; ++q) {
      if (!availability.available[i][q]) continue;
      next.w[i][q] =
          clamp_unit(state.w[i][q] + gamma * (state.e[i][q] - 0.5 * (state.M[i][q] + state.S[i][q])));
      if (inject) {
        const double z = estimate(i, q, tn);
        next.M[i][q] = z;
        next.S[i][q] = z;
        next.e[i][q] = z;
      } else {
        double mx = -kInfinity;
        for (int j : nin[i])
          if (availability.available[j][q]) mx = std::max(mx, state.M[j][q]);
        next.M[i][q] = mx;
        pool.clear();
        for (int j : nin[i])
          if (availability.available[j][q]) pool.push_back(state.S[j][q]);
        pool.push_back(state.M[i][q]);
        pool.push_back(state.e[i][q]);
        next.S[i][q] = submax_of(pool);
        next.e[i][q] = state.e[i][q];
      }
    }
  }
  return next;
}

AllocationState run_dpbrag(const RewardTable& availability, const EstimateFn& estimate,
                           const comms::GraphSequence& graph, const StepSchedule& schedule,
                           int rounds, double w0) {
  schedule.validate();
  availability.validate();
  if (rounds < 1) throw std::domain_error("run_dpbrag: rounds >= 1");
  AllocationState st = AllocationState::init(availability, estimate, w0);
  for (int t = 0; t < rounds; ++t) st = dpbrag_step(st, availability, estimate, graph, schedule);
  return st;
}

AllocationState run_dpbrag(const RewardTable& rewards, const comms::GraphSequence& graph,
                           const StepSchedule& schedule, int rounds, double w0) {
  auto exact = [&rewards](int i, int q, int) { return rewards.rho[i][q]; };
  AllocationState st = run_dpbrag(rewards, exact, graph, schedule, rounds, w0);
  for (int q = 0; q < rewards.n_tasks; ++q)
    if (dominating_agents(rewards, q).size() > 1) st.tie_warning = true;
  return st;
}

IncompleteAssignmentError::IncompleteAssignmentError(std::vector<int> orphans)
    : std::runtime_error([&orphans] {
        std::ostringstream os;
        os << "extract_assignment: no weight above threshold for task(s)";
        for (int q : orphans) os << ' ' << q;
        return os.str();
      }()),
      orphan_tasks(std::move(orphans)) {}

Partition extract_assignment(const AllocationState& state, const RewardTable& availability,
                             double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::domain_error("extract_assignment: threshold in (0,1)");
  Partition p;
  p.owner.assign(availability.n_tasks, -1);
  std::vector<int> orphans;
  for (int q = 0; q < availability.n_tasks; ++q) {
    double best = -1.0;
    int who = -1;
    for (int i = 0; i < availability.n_agents; ++i) {
      if (!availability.available[i][q]) continue;
      if (state.w[i][q] > best) {
        best = state.w[i][q];
        who = i;
      }
    }
    if (who < 0 || !(best > threshold)) {
      orphans.push_back(q);
      continue;
    }
    p.owner[q] = who;
  }
  if (!orphans.empty()) throw IncompleteAssignmentError(std::move(orphans));
  return p;
}

double mu_band_limit(const RewardTable& rewards, int task) {
  int holders = 0;
  for (int i = 0; i < rewards.n_agents; ++i)
    if (rewards.available[i][task]) ++holders;
  if (holders < 2) return kInfinity;
  double mx = -kInfinity, sub = -kInfinity;
  for (int i = 0; i < rewards.n_agents; ++i) {
    if (!rewards.available[i][task]) continue;
    const double r = rewards.rho[i][task];
    if (r > mx) {
      sub = mx;
      mx = r;
    } else if (r > sub) {
      sub = r;
    }
  }
  return 0.5 * (mx - sub);
}

}  // namespace behex::allocation
