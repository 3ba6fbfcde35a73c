#pragma once

#include <functional>
#include <stdexcept>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "behex/comms.hpp"

namespace behex::allocation {

// Per-(agent, task) expected rewards with an availability mask. Agents and
// tasks are dense 0-based ids; rho[i][q] is meaningful only where
// available[i][q] is true.
struct RewardTable {
  int n_agents = 0;
  int n_tasks = 0;
  std::vector<std::vector<bool>> available;
  std::vector<std::vector<double>> rho;

  static RewardTable full(const std::vector<std::vector<double>>& rewards);
  static RewardTable empty(int agents, int tasks);

  void set(int agent, int task, double reward);
  bool has(int agent, int task) const { return available[agent][task]; }
  double reward(int agent, int task) const;
  // Every task must be available to at least one agent.
  void validate() const;
};

struct Partition {
  // task -> owning agent
  std::vector<int> owner;
};

// [x]_0^1
double clamp_unit(double x);

// Agents i with task q available and rho_i(q) >= rho_j(q) for every holder j.
std::set<int> dominating_agents(const RewardTable& rewards, int task);

// Exact optimizer of the partition objective. The objective is separable
// across tasks, so each task goes to a dominating agent; ties break to the
// lowest agent id, which makes this a deterministic oracle.
Partition brute_force_partition(const RewardTable& rewards);

// Utility of agent i under weight profile w (w[i][q] in [0,1]):
// sum_q rho_i(q) w_i^q - max_{j != i, q in T_j} rho_j(q) w_j^q w_i^q,
// empty competitor max = 0.
double game_utility(int agent, const std::vector<std::vector<double>>& w,
                    const RewardTable& rewards);

// Switching function: f when t mod T == 0, else m.
double switch_fn(double m, double f, int t, int T);

// Step-size schedule of the weight dynamics. gamma(t) = alpha_of(k) on the
// consensus window [kT, kT+2*tau-1] and beta_of(k) on the ascent window
// [kT+2*tau, kT+T-1], with k = floor(t/T). Defaults: alpha a0/(k+1) -> 0 and
// beta b0*(k+1) -> infinity.
struct StepSchedule {
  int T = 8;
  int tau = 1;
  double a0 = 0.05;
  double b0 = 0.5;
  std::function<double(int)> alpha_of;  // optional overrides
  std::function<double(int)> beta_of;

  double alpha(int k) const { return alpha_of ? alpha_of(k) : a0 / static_cast<double>(k + 1); }
  double beta(int k) const { return beta_of ? beta_of(k) : b0 * static_cast<double>(k + 1); }
  void validate() const;  // requires T > 2*tau + 1
};

double step_size(int t, const StepSchedule& schedule);

// Weight + consensus registers. Registers are meaningful only on available
// (agent, task) pairs.
struct AllocationState {
  std::vector<std::vector<double>> w, M, S, e;
  int t = 0;
  bool tie_warning = false;

  static AllocationState init(const RewardTable& availability,
                              const std::function<double(int, int, int)>& estimate,
                              double w0 = 1.0);
};

// Estimates z_i^q(t); evaluated at injection times (t mod T == 0) only.
using EstimateFn = std::function<double(int agent, int task, int t)>;

// One synchronous round: weight update from the pre-step registers, then
// max/submax consensus with switching, then estimate injection. Consensus
// for a task runs only across agents holding that task.
AllocationState dpbrag_step(const AllocationState& state, const RewardTable& availability,
                            const EstimateFn& estimate, const comms::GraphSequence& graph,
                            const StepSchedule& schedule);

// Runs `rounds` steps from w(0) = w0 with registers seeded from z(.,.,0).
AllocationState run_dpbrag(const RewardTable& availability, const EstimateFn& estimate,
                           const comms::GraphSequence& graph, const StepSchedule& schedule,
                           int rounds, double w0 = 1.0);

// Exact-reward convenience: constant estimates, tie warning when some task
// lacks a unique dominating agent.
AllocationState run_dpbrag(const RewardTable& rewards, const comms::GraphSequence& graph,
                           const StepSchedule& schedule, int rounds, double w0 = 1.0);

struct IncompleteAssignmentError : std::runtime_error {
  std::vector<int> orphan_tasks;
  explicit IncompleteAssignmentError(std::vector<int> orphans);
};

// Task q -> agent with the largest weight provided it exceeds `threshold`;
// throws IncompleteAssignmentError listing tasks with no weight above it.
// Ties break to the lowest agent id.
Partition extract_assignment(const AllocationState& state, const RewardTable& availability,
                             double threshold = 0.5);

// 0.5 * (max - submax) of rewards for the task; +infinity when fewer than
// two agents hold it. Estimate streams must stay strictly inside this band.
double mu_band_limit(const RewardTable& rewards, int task);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace behex::allocation
