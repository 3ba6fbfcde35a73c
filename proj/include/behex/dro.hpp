#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace behex::dro {

// Empirical distribution of scalar reward samples with a known bounded
// support interval. Bounded support is what makes the worst-case mean
// bounds below exact closed forms; with unbounded support the midpoint
// estimate would collapse to the sample mean.
struct EmpiricalDistribution {
  std::vector<double> atoms;
  double lo = 0.0;
  double hi = 1.0;

  void validate() const;
  double mean() const;
  void add(double sample);
};

// Concentration constants for the Wasserstein radius. The constants c1, c2
// are calibration knobs (only their existence is guaranteed); defaults are
// c1 = e, c2 = 1 and are validated by the coverage tests.
struct ConcentrationParams {
  double theta = 0.1;   // confidence level, in (0,1)
  double c1 = 2.718281828459045;
  double c2 = 1.0;
  double a = 2.0;       // light-tail exponent, > 1
  int m = 1;            // sample dimension (scalar rewards)

  void validate() const;
};

// Two-branch radius: (log(c1/theta) / (c2 N))^(1/max{m,2}) when
// N >= log(c1/theta)/c2, exponent 1/a otherwise.
double epsilon_radius(int n_samples, const ConcentrationParams& params);

// Largest/smallest mean over the 1-Wasserstein ball of radius eps around the
// empirical distribution, restricted to the support interval.
double sup_mean_ball(const EmpiricalDistribution& emp, double eps);
double inf_mean_ball(const EmpiricalDistribution& emp, double eps);

// Midpoint of the two worst-case means.
double dr_estimate(const EmpiricalDistribution& emp, double eps);

// Per-task winner when one agent's lower bound strictly exceeds every other
// agent's upper bound; nullopt when intervals overlap.
// intervals[i] = {inf, sup} for agent i.
std::optional<int> separation_check(const std::vector<std::pair<double, double>>& intervals);

// 1-Wasserstein distance between two atom lists (equal-weight atoms), by the
// CDF-area formula on the line.
double wasserstein_1d(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

}  // namespace behex::dro
