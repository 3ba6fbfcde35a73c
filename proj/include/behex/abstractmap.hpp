#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace behex::abstractmap {

// Finite-cell abstraction of the exploration loop: beliefs per cell, binary
// ground truth, symmetric positive path lengths, and an affine belief
// contraction with factor lambda toward the truth.
struct AbstractWorld {
  int n_cells = 0;
  std::vector<double> eta;     // n x n, symmetric, positive off-diagonal
  std::vector<double> belief;  // p_k in [0,1]
  std::vector<int> truth;      // p*_k in {0,1}
  double lambda = 0.0;         // contraction factor in [0,1)
  bool hypothesis_at_t0 = false;  // |p_k(0) - p*_k| < 0.5 for all k, recorded

  static AbstractWorld make(std::vector<double> eta, std::vector<double> belief,
                            std::vector<int> truth, double lambda);
  double eta_at(int i, int j) const { return eta[static_cast<std::size_t>(i) * n_cells + j]; }
  // Extreme path-length ratios over cell quadruples.
  double d_max() const;
  double d_min() const;
};

struct AgentConfig {
  std::vector<double> alpha;  // behavior parameter per agent
  std::vector<int> pos;       // current cell per agent
};

struct AssignResult {
  std::vector<int> positions;    // conflict-resolved, pairwise distinct
  std::vector<int> raw_argmax;   // independent per-agent argmax cells
  bool raw_collision = false;    // two raw argmaxes coincided
};

// Each agent targets the cell (excluding its own position) maximizing
// H_alpha(p_k)/eta(x_i,k); coinciding targets are resolved by a max-total-
// value assignment over distinct cells. Throws when n_cells < agents + 1
// is violated in a way that makes distinct moves infeasible.
AssignResult assign_step(const AbstractWorld& world, const AgentConfig& agents);

// Visited cells contract toward their truth: p <- p* + lambda (p - p*).
// Unvisited beliefs are untouched.
std::vector<double> belief_step(const AbstractWorld& world, const std::vector<int>& visited);
// Variant with a per-step random contraction factor lambda' <= lambda.
std::vector<double> belief_step_noisy(const AbstractWorld& world, const std::vector<int>& visited,
                                      double lambda_step);

// RHS of the per-step entropy-decrease certificate:
// sum_i (log(1-p_k) - log(p_k)) (lambda^t / 2 - (p_k - p*_k)) over visited
// cells, evaluated at the pre-step beliefs. Returns -infinity (sentinel)
// when a visited belief is exactly 0 or 1; the realized change is then
// compared against 0 instead.
double entropy_decrease_bound(const std::vector<double>& belief_before,
                              const std::vector<int>& truth, const std::vector<int>& visited,
                              double lambda, int t);

// Smallest p in (0,1) where d_M H_ai(p) = d_m H_aj(p) or
// d_m H_ai(p) = d_M H_aj(p): dense scan (1e4 points) plus bisection to
// 1e-10, with tangent roots caught via |g| minima. Throws when the curves
// never meet (reported explicitly rather than guessing a convention).
double compute_pbar(double alpha_i, double alpha_j, double d_m, double d_max);
// Team-level: min over unordered pairs of distinct alphas.
double compute_pbar_team(const std::vector<double>& alphas, double d_m, double d_max);

struct StepRecord {
  int step = 0;
  std::vector<int> positions;
  double entropy = 0.0;          // H(t+1), after the belief update
  double realized_delta = 0.0;   // H(t+1) - H(t)
  double bound = 0.0;            // entropy_decrease_bound at this step
  bool bound_sentinel = false;   // a visited belief was exactly 0 or 1
  bool raw_collision = false;
  bool distinct_positions = true;
  bool lemma_violation = false;   // realized > applicable bound
  bool bound_nonnegative = false; // finite bound >= 0
};

struct AbstractTrace {
  double initial_entropy = 0.0;
  std::vector<StepRecord> steps;
  int distinctness_violations = 0;
  int lemma_violations = 0;
  int raw_collisions = 0;

  std::string to_csv() const;  // step, agent, cell, H(t), bound
};

AbstractTrace run_abstract(AbstractWorld world, AgentConfig agents, int steps);

}  // namespace behex::abstractmap
