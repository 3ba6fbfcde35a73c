#include "behex/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "behex/abstractmap.hpp"
#include "behex/allocation.hpp"
#include "behex/comms.hpp"
#include "behex/dro.hpp"
#include "behex/entropy.hpp"
#include "behex/rng.hpp"

namespace behex::checks {

namespace {
constexpr double kLog2 = 0.6931471805599453;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}
}  // namespace

CheckResult check_entropy_identities() {
  using namespace behex::entropy;
  double worst = 0.0;
  const auto shannon_params = BehaviorParam::from_alpha(1.0);
  for (int k = 0; k <= 10000; ++k) {
    const double p = static_cast<double>(k) / 10000.0;
    worst = std::max(worst, std::abs(behavioral_entropy(p, shannon_params) - shannon_entropy(p)));
  }
  bool pass = worst <= 1e-12;
  double worst_half = 0.0;
  for (double a : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0})
    worst_half = std::max(worst_half,
                          std::abs(behavioral_entropy(0.5, BehaviorParam::from_alpha(a)) - kLog2));
  pass = pass && worst_half <= 1e-9;
  return {"entropy-identities", pass,
          "max |H_1 - shannon| = " + fmt("%.3g", worst) +
              ", max |H(0.5) - log 2| = " + fmt("%.3g", worst_half)};
}

namespace {

struct Instance {
  allocation::RewardTable rewards;
  comms::GraphSequence graph;
  int tau;
};

Instance make_instance(std::uint64_t seed, int index) {
  Rng rng(Rng::mix(seed, {static_cast<std::uint64_t>(index)}));
  const int agents = rng.uniform_int(2, 5);
  const int tasks = rng.uniform_int(1, 6);
  std::vector<std::vector<double>> rho(agents, std::vector<double>(tasks));
  for (auto& row : rho)
    for (auto& v : row) v = rng.uniform(0.5, 2.0);
  Instance inst{allocation::RewardTable::full(rho), {}, 1};
  switch (index % 4) {
    case 0: inst.tau = 1; inst.graph = comms::static_complete(agents, 1); break;
    case 1: inst.tau = 2; inst.graph = comms::static_complete(agents, 2); break;
    case 2: inst.tau = 1; inst.graph = comms::static_ring(agents, 1); break;
    default: inst.tau = 2; inst.graph = comms::static_ring(agents, 2); break;
  }
  return inst;
}

bool same_partition(const allocation::Partition& a, const allocation::Partition& b) {
  return a.owner == b.owner;
}

}  // namespace

CheckResult check_allocation_oracle(int instances, std::uint64_t seed) {
  int matched = 0;
  for (int i = 0; i < instances; ++i) {
    const Instance inst = make_instance(seed, i);
    allocation::StepSchedule schedule;
    schedule.T = 8;
    schedule.tau = inst.tau;
    const auto state =
        allocation::run_dpbrag(inst.rewards, inst.graph, schedule, 12 * schedule.T, 1.0);
    try {
      const auto got = allocation::extract_assignment(state, inst.rewards, 0.5);
      if (same_partition(got, allocation::brute_force_partition(inst.rewards))) ++matched;
    } catch (const allocation::IncompleteAssignmentError&) {
    }
  }
  std::ostringstream os;
  os << matched << "/" << instances << " assignments matched the exact optimum";
  return {"allocation-oracle", matched == instances, os.str()};
}

CheckResult check_noisy_band(int instances, std::uint64_t seed, double min_fraction) {
  int matched = 0;
  for (int i = 0; i < instances; ++i) {
    const Instance inst = make_instance(seed, i);
    const auto& rewards = inst.rewards;
    std::vector<double> amplitude(rewards.n_tasks, 0.0);
    for (int q = 0; q < rewards.n_tasks; ++q) {
      const double band = allocation::mu_band_limit(rewards, q);
      amplitude[q] = std::isfinite(band) ? 0.9 * band : 0.1;
    }
    auto noisy = [&](int agent, int task, int t) {
      Rng r(Rng::mix(seed, {0xabcd, static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(agent), static_cast<std::uint64_t>(task),
                            static_cast<std::uint64_t>(t)}));
      return rewards.rho[agent][task] + r.uniform(-amplitude[task], amplitude[task]);
    };
    allocation::StepSchedule schedule;
    schedule.T = 8;
    schedule.tau = inst.tau;
    const auto state =
        allocation::run_dpbrag(rewards, noisy, inst.graph, schedule, 12 * schedule.T, 1.0);
    try {
      const auto got = allocation::extract_assignment(state, rewards, 0.5);
      if (same_partition(got, allocation::brute_force_partition(rewards))) ++matched;
    } catch (const allocation::IncompleteAssignmentError&) {
    }
  }
  std::ostringstream os;
  os << matched << "/" << instances << " noisy-estimate assignments matched ("
     << fmt("%.1f", 100.0 * min_fraction) << "% required)";
  return {"noisy-band-convergence",
          matched >= static_cast<int>(std::ceil(min_fraction * instances)), os.str()};
}

namespace {

// Register-only consensus trace; returns worst stabilization step count
// over `windows` injections, or -1 when some window never stabilizes.
int stabilization_worst(const comms::GraphSequence& graph, int n, std::uint64_t seed,
                        int windows, int window_len) {
  Rng rng(seed);
  int worst = 0;
  std::vector<double> M(n), S(n), e(n);
  for (int w = 0; w < windows; ++w) {
    std::vector<double> z(n);
    for (auto& v : z) v = rng.uniform(0.0, 1.0);
    const int t0 = w * window_len;
    for (int i = 0; i < n; ++i) M[i] = S[i] = e[i] = z[i];
    double gmax = *std::max_element(z.begin(), z.end());
    double gsub = -1.0;
    for (double v : z)
      if (v != gmax) gsub = std::max(gsub, v);
    if (gsub < 0.0) gsub = gmax;

    int stabilized_at = -1;
    for (int s = 1; s < window_len; ++s) {
      const auto nin = comms::closed_in_neighbors(graph, t0 + s);
      std::vector<double> M2(n), S2(n);
      for (int i = 0; i < n; ++i) {
        double mx = M[i];
        for (int j : nin[i]) mx = std::max(mx, M[j]);
        M2[i] = mx;
        std::vector<double> pool;
        for (int j : nin[i]) pool.push_back(S[j]);
        pool.push_back(M[i]);
        pool.push_back(e[i]);
        double pm = *std::max_element(pool.begin(), pool.end());
        double ps = -1.0;
        for (double v : pool)
          if (v != pm) ps = std::max(ps, v);
        S2[i] = ps < 0.0 ? pm : ps;
      }
      M = M2;
      S = S2;
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) ok = M[i] == gmax && S[i] == gsub;
      if (ok) {
        stabilized_at = s;
        break;
      }
    }
    if (stabilized_at < 0) return -1;
    worst = std::max(worst, stabilized_at);
  }
  return worst;
}

}  // namespace

CheckResult check_consensus_stabilization(std::uint64_t seed) {
  struct Family {
    std::string name;
    comms::GraphSequence graph;
  };
  std::vector<Family> families;
  for (int n = 2; n <= 6; ++n)
    families.push_back({"complete-n" + std::to_string(n), comms::static_complete(n, 1)});
  for (int n = 3; n <= 6; ++n)
    families.push_back({"pulsed-complete-n" + std::to_string(n), comms::pulsed_complete(n, 2)});
  for (int n = 3; n <= 5; ++n)
    families.push_back(
        {"pulsed-complete3-n" + std::to_string(n), comms::pulsed_complete(n, 3)});
  for (int n = 3; n <= 6; ++n)
    families.push_back({"ring-tau2-n" + std::to_string(n), comms::static_ring(n, 2)});
  for (int n = 5; n <= 6; ++n)
    families.push_back({"rotating-n" + std::to_string(n),
                        comms::random_patched(n, 0.0, n, Rng::mix(seed, {7, (std::uint64_t)n}))});

  int violations = 0;
  std::ostringstream os;
  for (const auto& fam : families) {
    const auto& g = fam.graph;
    const auto valid = comms::validate_assumption(g, 4 * g.tau);
    if (!valid.valid) {
      ++violations;
      os << fam.name << ": assumption violated; ";
      continue;
    }
    const int diam = comms::diameter(g.n, comms::union_arcs(g, 0, std::max(g.tau, 64)));
    const int bound = diam * g.tau;
    const int window = 2 * bound + 8;
    const int worst = stabilization_worst(g, g.n, Rng::mix(seed, {Rng::hash_tag(fam.name)}), 6,
                                          window);
    if (worst < 0 || worst > bound) {
      ++violations;
      os << fam.name << ": stabilized in " << worst << " > diam*tau = " << bound << "; ";
    }
  }
  if (violations == 0) {
    os << families.size() << " sequence families, all registers stabilized within diam*tau";
  }
  return {"consensus-stabilization", violations == 0, os.str()};
}

namespace {
constexpr double kPi = 3.141592653589793;

// Truncated standard normal on [0,1] with location mu and scale sigma.
double truncated_gaussian_mean(double mu, double sigma) {
  const double a = (0.0 - mu) / sigma, b = (1.0 - mu) / sigma;
  auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); };
  auto Phi = [](double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); };
  return mu + sigma * (phi(a) - phi(b)) / (Phi(b) - Phi(a));
}

double sample_truncated_gaussian(Rng& rng, double mu, double sigma) {
  for (int it = 0; it < 10000; ++it) {
    // Box-Muller from two uniforms.
    const double u1 = std::max(rng.uniform(), 1e-300), u2 = rng.uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    const double x = mu + sigma * z;
    if (x >= 0.0 && x <= 1.0) return x;
  }
  return std::clamp(mu, 0.0, 1.0);
}
}  // namespace

CheckResult check_dro_coverage(std::uint64_t seed, int trials) {
  dro::ConcentrationParams params;  // defaults: theta 0.1, c1 = e, c2 = 1
  std::ostringstream os;
  bool pass = true;
  for (int n_samples : {10, 50, 200}) {
    Rng rng(Rng::mix(seed, {static_cast<std::uint64_t>(n_samples)}));
    int covered = 0;
    for (int t = 0; t < trials; ++t) {
      const double mu = rng.uniform(0.2, 0.8);
      const double sigma = rng.uniform(0.1, 0.4);
      const double true_mean = truncated_gaussian_mean(mu, sigma);
      dro::EmpiricalDistribution emp;
      emp.lo = 0.0;
      emp.hi = 1.0;
      for (int k = 0; k < n_samples; ++k)
        emp.atoms.push_back(sample_truncated_gaussian(rng, mu, sigma));
      const double eps = dro::epsilon_radius(n_samples, params);
      if (dro::inf_mean_ball(emp, eps) <= true_mean && true_mean <= dro::sup_mean_ball(emp, eps))
        ++covered;
    }
    const double frac = static_cast<double>(covered) / trials;
    pass = pass && frac >= 1.0 - params.theta;
    os << "N=" << n_samples << ": " << fmt("%.1f", 100.0 * frac) << "% covered; ";
  }
  return {"dro-coverage", pass, os.str()};
}

CheckResult check_separation_chain(std::uint64_t seed) {
  int built = 0, matched = 0;
  for (int inst = 0; inst < 50; ++inst) {
    Rng rng(Rng::mix(seed, {0x17, static_cast<std::uint64_t>(inst)}));
    const int agents = rng.uniform_int(2, 4);
    const int tasks = rng.uniform_int(1, 4);
    // Spread the true means far enough apart that the ball intervals at the
    // final sample count separate per task.
    dro::ConcentrationParams params;
    const int n_final = 200;
    const double eps_final = dro::epsilon_radius(n_final, params);
    std::vector<std::vector<double>> mu(agents, std::vector<double>(tasks));
    std::vector<int> winner(tasks);
    const double spread = 2.0 * eps_final + 0.3;
    for (int q = 0; q < tasks; ++q) {
      winner[q] = rng.uniform_int(0, agents - 1);
      for (int i = 0; i < agents; ++i)
        mu[i][q] = (i == winner[q]) ? 4.0 + spread : rng.uniform(0.5, 1.5);
    }
    // Build empirical streams; samples uniform around the true means.
    std::vector<std::vector<dro::EmpiricalDistribution>> emp(
        agents, std::vector<dro::EmpiricalDistribution>(tasks));
    for (int i = 0; i < agents; ++i)
      for (int q = 0; q < tasks; ++q) {
        emp[i][q].lo = 0.0;
        emp[i][q].hi = 10.0;
        for (int k = 0; k < n_final; ++k)
          emp[i][q].atoms.push_back(std::clamp(mu[i][q] + rng.uniform(-0.1, 0.1), 0.0, 10.0));
      }
    // Check Theorem-4.5 style separation per task.
    bool separated = true;
    std::vector<int> sep_winner(tasks, -1);
    for (int q = 0; q < tasks; ++q) {
      std::vector<std::pair<double, double>> intervals;
      for (int i = 0; i < agents; ++i)
        intervals.emplace_back(dro::inf_mean_ball(emp[i][q], eps_final),
                               dro::sup_mean_ball(emp[i][q], eps_final));
      const auto w = dro::separation_check(intervals);
      if (!w) {
        separated = false;
        break;
      }
      sep_winner[q] = *w;
    }
    if (!separated) continue;
    ++built;
    std::vector<std::vector<double>> rho(agents, std::vector<double>(tasks));
    for (int i = 0; i < agents; ++i)
      for (int q = 0; q < tasks; ++q) rho[i][q] = mu[i][q];
    const auto rewards = allocation::RewardTable::full(rho);
    auto estimate = [&](int i, int q, int) {
      return dro::dr_estimate(emp[i][q], eps_final);
    };
    allocation::StepSchedule schedule;
    const auto graph = comms::static_complete(agents, 1);
    const auto state = allocation::run_dpbrag(rewards, estimate, graph, schedule, 96, 1.0);
    try {
      const auto part = allocation::extract_assignment(state, rewards, 0.5);
      bool ok = true;
      for (int q = 0; q < tasks; ++q) ok = ok && part.owner[q] == sep_winner[q];
      if (ok) ++matched;
    } catch (const allocation::IncompleteAssignmentError&) {
    }
  }
  std::ostringstream os;
  os << matched << "/" << built << " separated instances assigned to the separating agents";
  return {"separation-chain", built > 0 && matched == built, os.str()};
}

CheckResult check_lemma_certificate(std::uint64_t seed) {
  int ineq_violations = 0, sign_violations = 0, steps_checked = 0;
  for (double lambda : {0.0, 0.3, 0.7}) {
    for (int s = 0; s < 50; ++s) {
      Rng rng(Rng::mix(seed, {0x61, static_cast<std::uint64_t>(lambda * 10),
                              static_cast<std::uint64_t>(s)}));
      const int cells = rng.uniform_int(10, 30);
      const int agents = rng.uniform_int(2, 4);
      std::vector<double> eta(static_cast<std::size_t>(cells) * cells, 0.0);
      for (int i = 0; i < cells; ++i)
        for (int j = i + 1; j < cells; ++j)
          eta[static_cast<std::size_t>(i) * cells + j] =
              eta[static_cast<std::size_t>(j) * cells + i] = rng.uniform(1.0, 2.0);
      std::vector<int> truth(cells);
      std::vector<double> belief(cells);
      for (int k = 0; k < cells; ++k) {
        truth[k] = rng.uniform() < 0.4 ? 1 : 0;
        const double dist = rng.uniform(0.05, 0.45);
        belief[k] = truth[k] == 1 ? 1.0 - dist : dist;
      }
      auto world = abstractmap::AbstractWorld::make(eta, belief, truth, lambda);
      abstractmap::AgentConfig cfg;
      for (int a = 0; a < agents; ++a) {
        cfg.alpha.push_back(rng.uniform(0.4, 3.0));
        cfg.pos.push_back(rng.uniform_int(0, cells - 1));
      }
      std::sort(cfg.pos.begin(), cfg.pos.end());
      cfg.pos.erase(std::unique(cfg.pos.begin(), cfg.pos.end()), cfg.pos.end());
      while (static_cast<int>(cfg.pos.size()) < agents) {
        const int c = rng.uniform_int(0, cells - 1);
        if (std::find(cfg.pos.begin(), cfg.pos.end(), c) == cfg.pos.end()) cfg.pos.push_back(c);
      }
      const auto trace = abstractmap::run_abstract(world, cfg, 200);
      for (const auto& rec : trace.steps) {
        ++steps_checked;
        if (rec.lemma_violation) ++ineq_violations;
        if (!rec.bound_sentinel && rec.bound_nonnegative) ++sign_violations;
      }
    }
  }
  std::ostringstream os;
  os << ineq_violations << " inequality violations, " << sign_violations
     << " nonnegative-bound steps across " << steps_checked << " steps";
  return {"lemma-certificate", ineq_violations == 0 && sign_violations == 0, os.str()};
}

CheckResult check_prop_certificate(std::uint64_t seed) {
  const std::vector<double> alpha_pool{0.5, 0.8, 1.5, 2.5, 4.0};
  int distinct_violations = 0, control_collisions = 0;
  for (int s = 0; s < 50; ++s) {
    Rng rng(Rng::mix(seed, {0x71, static_cast<std::uint64_t>(s)}));
    const int cells = rng.uniform_int(10, 30);
    const int agents = rng.uniform_int(2, 4);
    const double lambda = s % 2 == 0 ? 0.3 : 0.7;
    std::vector<double> eta(static_cast<std::size_t>(cells) * cells, 0.0);
    for (int i = 0; i < cells; ++i)
      for (int j = i + 1; j < cells; ++j)
        eta[static_cast<std::size_t>(i) * cells + j] =
            eta[static_cast<std::size_t>(j) * cells + i] = rng.uniform(1.0, 1.5);

    std::vector<double> alphas;
    {
      auto pool = alpha_pool;
      for (int a = 0; a < agents; ++a) {
        const int pick = rng.uniform_int(0, static_cast<int>(pool.size()) - 1);
        alphas.push_back(pool[pick]);
        pool.erase(pool.begin() + pick);
      }
    }
    double emax = 0.0, emin = 1e300;
    for (int i = 0; i < cells; ++i)
      for (int j = 0; j < cells; ++j)
        if (i != j) {
          emax = std::max(emax, eta[static_cast<std::size_t>(i) * cells + j]);
          emin = std::min(emin, eta[static_cast<std::size_t>(i) * cells + j]);
        }
    const double pbar = abstractmap::compute_pbar_team(alphas, emin / emax, emax / emin);

    std::vector<int> truth(cells);
    std::vector<double> belief(cells);
    const double lo = std::min(1e-3, pbar / 10.0);
    for (int k = 0; k < cells; ++k) {
      truth[k] = rng.uniform() < 0.4 ? 1 : 0;
      const double p = rng.uniform(lo, pbar - pbar / 10.0);
      belief[k] = truth[k] == 1 ? 1.0 - p : p;
    }
    auto world = abstractmap::AbstractWorld::make(eta, belief, truth, lambda);
    abstractmap::AgentConfig cfg;
    cfg.alpha = alphas;
    while (static_cast<int>(cfg.pos.size()) < agents) {
      const int c = rng.uniform_int(0, cells - 1);
      if (std::find(cfg.pos.begin(), cfg.pos.end(), c) == cfg.pos.end()) cfg.pos.push_back(c);
    }
    const auto trace = abstractmap::run_abstract(world, cfg, 200);
    distinct_violations += trace.distinctness_violations;

    // Control: identical alphas with all-equal path lengths must exhibit
    // raw-argmax collisions.
    std::vector<double> eta_flat(static_cast<std::size_t>(cells) * cells, 1.0);
    for (int i = 0; i < cells; ++i) eta_flat[static_cast<std::size_t>(i) * cells + i] = 0.0;
    auto control_world = abstractmap::AbstractWorld::make(eta_flat, belief, truth, lambda);
    abstractmap::AgentConfig control_cfg;
    control_cfg.alpha.assign(agents, 1.0);
    control_cfg.pos = cfg.pos;
    const auto control = abstractmap::run_abstract(control_world, control_cfg, 200);
    control_collisions += control.raw_collisions;
  }
  std::ostringstream os;
  os << distinct_violations << " distinctness violations; control raw collisions = "
     << control_collisions;
  return {"prop-distinctness", distinct_violations == 0 && control_collisions >= 1, os.str()};
}

std::vector<CheckResult> run_suite(const std::string& suite) {
  if (suite == "entropy") return {check_entropy_identities()};
  if (suite == "allocation")
    return {check_allocation_oracle(200, 20240801), check_noisy_band(200, 20240801),
            check_consensus_stabilization(20240801)};
  if (suite == "dro") return {check_dro_coverage(20240801), check_separation_chain(20240801)};
  if (suite == "lemma") return {check_lemma_certificate(20240801)};
  if (suite == "prop") return {check_prop_certificate(20240801)};
  throw std::invalid_argument("unknown check suite: " + suite);
}

}  // namespace behex::checks
