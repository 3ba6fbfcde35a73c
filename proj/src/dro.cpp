#include "behex/dro.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace behex::dro {

void EmpiricalDistribution::validate() const {
  if (atoms.empty()) throw std::domain_error("EmpiricalDistribution: needs at least one atom");
  if (!(lo < hi)) throw std::domain_error("EmpiricalDistribution: support must satisfy lo < hi");
  for (double a : atoms)
    if (!(a >= lo && a <= hi))
      throw std::domain_error("EmpiricalDistribution: atom outside support");
}

double EmpiricalDistribution::mean() const {
  validate();
  return std::accumulate(atoms.begin(), atoms.end(), 0.0) / static_cast<double>(atoms.size());
}

void EmpiricalDistribution::add(double sample) {
  atoms.push_back(std::clamp(sample, lo, hi));
}

void ConcentrationParams::validate() const {
  if (!(theta > 0.0 && theta < 1.0)) throw std::domain_error("ConcentrationParams: theta in (0,1)");
  if (!(c1 > 0.0 && c2 > 0.0)) throw std::domain_error("ConcentrationParams: c1, c2 > 0");
  if (!(a > 1.0)) throw std::domain_error("ConcentrationParams: a > 1");
  if (m < 1) throw std::domain_error("ConcentrationParams: m >= 1");
}

double epsilon_radius(int n_samples, const ConcentrationParams& params) {
  params.validate();
  if (n_samples < 1) throw std::domain_error("epsilon_radius: N >= 1");
  const double num = std::log(params.c1 / params.theta);
  const double ratio = num / (params.c2 * static_cast<double>(n_samples));
  const double threshold = num / params.c2;
  const double exponent =
      (static_cast<double>(n_samples) >= threshold)
          ? 1.0 / static_cast<double>(std::max(params.m, 2))
          : 1.0 / params.a;
  return std::pow(ratio, exponent);
}

double sup_mean_ball(const EmpiricalDistribution& emp, double eps) {
  emp.validate();
  if (eps < 0.0) throw std::domain_error("sup_mean_ball: eps >= 0");
  const double mu = emp.mean();
  return mu + std::min(eps, emp.hi - mu);
}

double inf_mean_ball(const EmpiricalDistribution& emp, double eps) {
  emp.validate();
  if (eps < 0.0) throw std::domain_error("inf_mean_ball: eps >= 0");
  const double mu = emp.mean();
  return mu - std::min(eps, mu - emp.lo);
}

double dr_estimate(const EmpiricalDistribution& emp, double eps) {
  return 0.5 * (sup_mean_ball(emp, eps) + inf_mean_ball(emp, eps));
}

std::optional<int> separation_check(const std::vector<std::pair<double, double>>& intervals) {
  const int n = static_cast<int>(intervals.size());
  if (n == 0) return std::nullopt;
  if (n == 1) return 0;
  for (int i = 0; i < n; ++i) {
    bool wins = true;
    for (int j = 0; j < n && wins; ++j) {
      if (j == i) continue;
      if (!(intervals[i].first > intervals[j].second)) wins = false;
    }
    if (wins) return i;
  }
  return std::nullopt;
}

double wasserstein_1d(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.atoms.empty() || b.atoms.empty())
    throw std::domain_error("wasserstein_1d: both distributions must be non-empty");
  std::vector<double> xa = a.atoms, xb = b.atoms;
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());

  // Integrate |F_a(x) - F_b(x)| between consecutive breakpoints.
  std::vector<double> pts;
  pts.reserve(xa.size() + xb.size());
  pts.insert(pts.end(), xa.begin(), xa.end());
  pts.insert(pts.end(), xb.begin(), xb.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double x = pts[k];
    const double fa = static_cast<double>(std::upper_bound(xa.begin(), xa.end(), x) - xa.begin()) /
                      static_cast<double>(xa.size());
    const double fb = static_cast<double>(std::upper_bound(xb.begin(), xb.end(), x) - xb.begin()) /
                      static_cast<double>(xb.size());
    total += std::abs(fa - fb) * (pts[k + 1] - x);
  }
  return total;
}

}  // namespace behex::dro
