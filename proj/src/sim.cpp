#include "behex/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "behex/dro.hpp"
#include "behex/entropy.hpp"
#include "behex/planner.hpp"
#include "behex/rng.hpp"

namespace behex::sim {

using world::Cell;
using world::OccupancyGrid;

void SimConfig::validate() const {
  if (robots < 1) throw std::domain_error("SimConfig: robots >= 1");
  if (!(alpha_lo > 0.0) || alpha_lo > alpha_hi)
    throw std::domain_error("SimConfig: need 0 < alpha_lo <= alpha_hi");
  if (!(sensing_radius > 0.0)) throw std::domain_error("SimConfig: sensing_radius > 0");
  if (noise < 0 || noise > 2) throw std::domain_error("SimConfig: noise in {0,1,2}");
  if (buffer_cap < 1) throw std::domain_error("SimConfig: buffer_cap >= 1");
  if (!(completion_fraction > 0.0 && completion_fraction <= 1.0))
    throw std::domain_error("SimConfig: completion_fraction in (0,1]");
  if (tick_cap < 1) throw std::domain_error("SimConfig: tick_cap >= 1");
}

std::vector<double> pwc_sample(double a, double b, int count, std::uint64_t seed) {
  if (!(a > 0.0)) throw std::domain_error("pwc_sample: a > 0");
  if (a > b) throw std::domain_error("pwc_sample: a <= b");
  Rng rng(seed);
  std::vector<double> out(count);
  const bool split = a < 1.0 && 1.0 < b;
  for (int i = 0; i < count; ++i) {
    if (a == b)
      out[i] = a;
    else if (!split)
      out[i] = rng.uniform(a, b);
    else
      out[i] = rng.uniform() < 0.5 ? rng.uniform(a, 1.0) : rng.uniform(1.0, b);
  }
  return out;
}

allocation::RewardTable perturb_rewards(const allocation::RewardTable& rewards, double scale,
                                        std::uint64_t seed) {
  if (!(scale > 0.0)) throw std::domain_error("perturb_rewards: scale > 0");
  // The perturbation may not reorder rewards that already differ: it must
  // stay below half the smallest nonzero gap per task.
  double min_gap = allocation::kInfinity;
  for (int q = 0; q < rewards.n_tasks; ++q) {
    std::vector<double> vals;
    for (int i = 0; i < rewards.n_agents; ++i)
      if (rewards.available[i][q]) vals.push_back(rewards.rho[i][q]);
    std::sort(vals.begin(), vals.end());
    for (std::size_t k = 1; k < vals.size(); ++k) {
      const double gap = vals[k] - vals[k - 1];
      if (gap > 0.0) min_gap = std::min(min_gap, gap);
    }
  }
  if (std::isfinite(min_gap) && !(scale < 0.5 * min_gap))
    throw std::domain_error("perturb_rewards: scale would reorder non-tied rewards");

  allocation::RewardTable out = rewards;
  for (int q = 0; q < out.n_tasks; ++q) {
    for (int attempt = 0;; ++attempt) {
      for (int i = 0; i < out.n_agents; ++i) {
        if (!out.available[i][q]) continue;
        Rng r(Rng::mix(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(q),
                              static_cast<std::uint64_t>(attempt)}));
        const double eps = scale * (0.5 + 0.5 * r.uniform());  // in (0, scale)
        out.rho[i][q] = rewards.rho[i][q] + eps;
      }
      if (allocation::dominating_agents(out, q).size() == 1) break;
      if (attempt > 16) throw std::runtime_error("perturb_rewards: could not break tie");
    }
  }
  return out;
}

namespace {

struct Cluster {
  int id = 0;
  Cell representative;
  std::vector<Cell> members;
};

std::vector<Cluster> cluster_frontiers(const std::vector<world::Frontier>& frontiers) {
  std::map<int, Cluster> by_id;
  for (const auto& f : frontiers) {
    auto& c = by_id[f.cluster_id];
    c.id = f.cluster_id;
    c.representative = f.representative;
    c.members.push_back(f.cell);
  }
  std::vector<Cluster> out;
  out.reserve(by_id.size());
  for (auto& [id, c] : by_id) out.push_back(std::move(c));
  return out;
}

// Free ground-truth cells, scan order.
std::vector<Cell> free_cells(const OccupancyGrid& truth) {
  std::vector<Cell> cells;
  for (int y = 0; y < truth.height(); ++y)
    for (int x = 0; x < truth.width(); ++x)
      if (truth.at(x, y) == 0.0) cells.push_back({x, y});
  return cells;
}

struct AllocationOutcome {
  // cluster index -> robot id (every cluster gets exactly one owner)
  std::vector<int> owner;
  int orphan_fallbacks = 0;
};

// One team-wide allocation phase over the visible clusters. Robots abstain
// from clusters they cannot see or reach; estimates are distributionally
// robust midpoints over growing sample sets, refreshed at every injection.
AllocationOutcome allocate_clusters(const OccupancyGrid& map,
                                    const std::vector<Cluster>& clusters,
                                    const std::vector<std::vector<int>>& visible,
                                    const std::vector<std::vector<double>>& fields,
                                    const std::vector<RobotState>& robots,
                                    const SimConfig& cfg, std::uint64_t phase_seed) {
  const int n = static_cast<int>(robots.size());
  const int m = static_cast<int>(clusters.size());

  auto table = allocation::RewardTable::empty(n, m);
  for (int i = 0; i < n; ++i)
    for (int q : visible[i]) table.available[i][q] = true;

  // Distance utilities are deterministic per phase (poses frozen); only the
  // entropy term is sampled.
  std::vector<std::vector<double>> phi(n, std::vector<double>(m, 0.0));
  std::vector<std::vector<double>> support_hi(n, std::vector<double>(m, 1.0));
  for (int i = 0; i < n; ++i) {
    for (int q : visible[i]) {
      phi[i][q] = world::distance_utility_from_field(map, fields[i], robots[i].pos,
                                                     clusters[q].representative);
      const auto cells = world::footprint_cells(map, clusters[q].representative,
                                                cfg.sensing_radius);
      support_hi[i][q] =
          std::max(1e-9, static_cast<double>(cells.size()) * std::log(2.0) * phi[i][q]);
    }
  }

  dro::ConcentrationParams cparams;
  cparams.theta = cfg.dro_theta;

  struct Stream {
    dro::EmpiricalDistribution emp;
    Rng rng{0};
  };
  std::vector<std::vector<Stream>> streams(n, std::vector<Stream>(m));
  for (int i = 0; i < n; ++i)
    for (int q : visible[i]) {
      streams[i][q].emp.lo = 0.0;
      streams[i][q].emp.hi = support_hi[i][q];
      streams[i][q].rng = Rng(Rng::mix(phase_seed, {0x5a, static_cast<std::uint64_t>(i),
                                                    static_cast<std::uint64_t>(q)}));
    }

  auto estimate = [&](int i, int q, int) -> double {
    auto& st = streams[i][q];
    if (static_cast<int>(st.emp.atoms.size()) < cfg.sample_cap) {
      const double sample =
          world::sample_reward_with_phi(map, clusters[q].representative, cfg.sensing_radius,
                                        entropy::BehaviorParam::from_alpha(robots[i].alpha),
                                        phi[i][q], st.rng, cfg.reward_delta);
      st.emp.add(sample);
    }
    const double eps =
        dro::epsilon_radius(static_cast<int>(st.emp.atoms.size()), cparams);
    return dro::dr_estimate(st.emp, eps);
  };

  // Shared-frontier graph plus rotating spanning patch: Assumption-valid
  // with period tau = n by construction.
  std::vector<comms::Arc> shared;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool common = false;
      for (int q : visible[i]) {
        if (table.available[j][q]) {
          common = true;
          break;
        }
      }
      if (common) {
        shared.emplace_back(i, j);
        shared.emplace_back(j, i);
      }
    }
  const int tau = cfg.tau > 0 ? cfg.tau : std::max(1, n);
  const auto graph = comms::patched_static(n, shared, tau);

  allocation::StepSchedule schedule;
  schedule.tau = tau;
  schedule.T = std::max(cfg.T, 2 * tau + 2);
  schedule.a0 = cfg.a0;
  schedule.b0 = cfg.b0;
  const int rounds = cfg.outer_periods * schedule.T;

  const auto state = allocation::run_dpbrag(table, estimate, graph, schedule, rounds, 1.0);

  AllocationOutcome out;
  out.owner.assign(m, -1);
  try {
    const auto part = allocation::extract_assignment(state, table, 0.5);
    out.owner = part.owner;
  } catch (const allocation::IncompleteAssignmentError& err) {
    // Converged weights can stay below threshold under sampled rewards;
    // complete the partition by per-task argmax weight (ties: lowest id).
    for (int q = 0; q < m; ++q) {
      double best = -1.0;
      int who = -1;
      for (int i = 0; i < n; ++i) {
        if (!table.available[i][q]) continue;
        if (state.w[i][q] > best) {
          best = state.w[i][q];
          who = i;
        }
      }
      out.owner[q] = who;
    }
    out.orphan_fallbacks = static_cast<int>(err.orphan_tasks.size());
  }
  return out;
}

}  // namespace

EpisodeResult run_episode(const SimConfig& config, const SnapshotFn& snapshot,
                          int snapshot_every) {
  config.validate();
  Rng root(config.seed);

  OccupancyGrid truth =
      config.map_file.empty()
          ? world::generate_map(world::map_kind_from_string(config.map_kind), config.map_width,
                                config.map_height, Rng::mix(config.seed, {0x11}),
                                config.resolution)
          : world::load_grid_file(config.map_file);
  OccupancyGrid map = world::add_quadrant_noise(truth, Rng::mix(config.seed, {0x22}),
                                                config.noise_border);

  const auto alphas = pwc_sample(config.alpha_lo, config.alpha_hi, config.robots,
                                 Rng::mix(config.seed, {0x33}));

  // Start positions: uniform over free truth cells, without replacement.
  auto free = free_cells(truth);
  if (static_cast<int>(free.size()) < config.robots)
    throw std::runtime_error("run_episode: not enough free cells for robots");
  Rng pos_rng(Rng::mix(config.seed, {0x44}));
  std::vector<RobotState> robots(config.robots);
  for (int i = 0; i < config.robots; ++i) {
    const int pick = pos_rng.uniform_int(0, static_cast<int>(free.size()) - 1);
    robots[i].id = i;
    robots[i].pos = free[pick];
    robots[i].alpha = alphas[i];
    robots[i].frontier_radius = 10.0 * config.sensing_radius;
    free.erase(free.begin() + pick);
  }

  const world::SensorModel sensor{config.sensing_radius, config.noise};
  Rng sense_rng(Rng::mix(config.seed, {0x55}));
  for (auto& r : robots) world::sense_update(map, truth, r.pos, sensor, sense_rng);

  EpisodeResult result;
  auto& metrics = result.metrics;
  metrics.per_robot_path.assign(config.robots, 0.0);
  metrics.initial_entropy = world::total_map_entropy(map);
  metrics.entropy_trace.push_back(metrics.initial_entropy);
  const double target = (1.0 - config.completion_fraction) * metrics.initial_entropy;

  bool done = metrics.initial_entropy <= target;
  metrics.completed = done;
  int tick = 0;
  bool frontier_exhausted = false;

  while (!done && tick < config.tick_cap && !frontier_exhausted) {
    bool realloc_done_this_tick = false;
    bool any_leg_this_tick = false;
    for (auto& robot : robots) {
      if (robot.task_buffer.empty()) {
        if (realloc_done_this_tick) continue;  // wait for next tick
        const auto frontiers = world::extract_frontiers(map);
        if (frontiers.empty()) {
          frontier_exhausted = true;
          break;
        }
        const auto clusters = cluster_frontiers(frontiers);
        const int m = static_cast<int>(clusters.size());

        // Availability: a cluster belongs to a robot's task set when a
        // member cell falls inside its (possibly expanded) frontier radius
        // and its representative is reachable through traversable cells.
        std::vector<std::vector<double>> fields(config.robots);
        for (const auto& r : robots) fields[r.id] = world::distance_field(map, r.pos);
        std::vector<std::vector<int>> visible(config.robots);
        for (auto& r : robots) {
          auto query = world::frontiers_in_radius(map, frontiers, r.pos, r.frontier_radius);
          r.frontier_radius = std::max(r.frontier_radius, query.effective_radius);
          std::vector<char> seen(m, 0);
          for (const auto& f : query.frontiers) seen[f.cluster_id] = 1;
          for (int q = 0; q < m; ++q) {
            if (!seen[q]) continue;
            const Cell rep = clusters[q].representative;
            const double eta = fields[r.id][static_cast<std::size_t>(rep.y) * map.width() + rep.x];
            if (std::isfinite(eta)) visible[r.id].push_back(q);
          }
        }
        // Clusters nobody can claim stay unassigned this phase; they are
        // picked up after radii expand or approaches get sensed clear.
        std::vector<int> claimable;
        for (int q = 0; q < m; ++q) {
          bool any = false;
          for (int i = 0; i < config.robots && !any; ++i)
            any = std::find(visible[i].begin(), visible[i].end(), q) != visible[i].end();
          if (any) claimable.push_back(q);
        }
        if (claimable.empty()) {
          frontier_exhausted = true;
          break;
        }
        std::vector<Cluster> live;
        std::vector<std::vector<int>> live_visible(config.robots);
        std::vector<int> remap(m, -1);
        for (int q : claimable) {
          remap[q] = static_cast<int>(live.size());
          live.push_back(clusters[q]);
        }
        for (int i = 0; i < config.robots; ++i)
          for (int q : visible[i])
            if (remap[q] >= 0) live_visible[i].push_back(remap[q]);

        const auto outcome =
            allocate_clusters(map, live, live_visible, fields, robots, config,
                              Rng::mix(config.seed, {0x66, static_cast<std::uint64_t>(
                                                               result.reallocations)}));
        ++result.reallocations;
        result.orphan_fallbacks += outcome.orphan_fallbacks;

        // Partition legality: every claimable cluster exactly one owner.
        for (int q = 0; q < static_cast<int>(live.size()); ++q)
          if (outcome.owner[q] < 0) ++result.partition_violations;

        for (auto& r : robots) {
          std::vector<int> owned;
          for (int q = 0; q < static_cast<int>(live.size()); ++q)
            if (outcome.owner[q] == r.id) owned.push_back(q);
          if (owned.empty()) {
            r.task_buffer.clear();
            continue;
          }
          // Keep at most N best by the robot's own deterministic valuation.
          const auto& field = fields[r.id];
          std::vector<std::pair<double, int>> scored;
          for (int q : owned) {
            const double phi = world::distance_utility_from_field(map, field, r.pos,
                                                                  live[q].representative);
            const double nu = world::info_gain(map, live[q].representative,
                                               config.sensing_radius,
                                               entropy::BehaviorParam::from_alpha(r.alpha));
            scored.emplace_back(nu * phi, q);
          }
          std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
          });
          if (static_cast<int>(scored.size()) > config.buffer_cap)
            scored.resize(config.buffer_cap);
          std::vector<Cell> targets;
          for (const auto& [v, q] : scored) targets.push_back(live[q].representative);
          const auto tour = planner::tsp_tour(r.pos, targets);
          r.task_buffer.clear();
          for (int idx : tour.order) r.task_buffer.push_back(targets[idx]);
        }
        realloc_done_this_tick = true;
      }

      if (robot.task_buffer.empty()) continue;
      const Cell head = robot.task_buffer.front();
      robot.task_buffer.erase(robot.task_buffer.begin());
      planner::RrtParams rp;
      rp.seed = Rng::mix(config.seed, {0x77, static_cast<std::uint64_t>(tick),
                                       static_cast<std::uint64_t>(robot.id)});
      try {
        const auto path = planner::rrt_path(map, robot.pos, head, rp);
        // Map along the way: sense at samples spaced at most half the
        // sensing radius along every segment, not just at waypoints.
        const double spacing_cells = std::max(1.0, 0.5 * sensor.radius / map.resolution());
        for (std::size_t s = 0; s < path.waypoints.size(); ++s) {
          if (s == 0) {
            robot.pos = path.waypoints[0];
            world::sense_update(map, truth, robot.pos, sensor, sense_rng);
            continue;
          }
          const Cell a = path.waypoints[s - 1], b = path.waypoints[s];
          const double len = std::hypot(static_cast<double>(b.x - a.x),
                                        static_cast<double>(b.y - a.y));
          const int steps = std::max(1, static_cast<int>(std::ceil(len / spacing_cells)));
          for (int k = 1; k <= steps; ++k) {
            const double t = static_cast<double>(k) / steps;
            const Cell c{static_cast<int>(std::lround(a.x + t * (b.x - a.x))),
                         static_cast<int>(std::lround(a.y + t * (b.y - a.y)))};
            robot.pos = c;
            world::sense_update(map, truth, c, sensor, sense_rng);
          }
        }
        robot.path_traveled += path.length;
        metrics.per_robot_path[robot.id] += path.length;
        any_leg_this_tick = true;
      } catch (const planner::NoPathError&) {
        // Unreachable under the current map; drop the task and move on.
      }
    }

    if (frontier_exhausted && !any_leg_this_tick) break;
    ++tick;
    const double h = world::total_map_entropy(map);
    metrics.entropy_trace.push_back(h);
    if (snapshot && snapshot_every > 0 && tick % snapshot_every == 0) snapshot(map, tick);
    if (h <= target) done = true;
  }

  metrics.iterations = tick;
  metrics.completed = done;
  metrics.final_entropy = metrics.entropy_trace.back();
  metrics.total_path = 0.0;
  for (double d : metrics.per_robot_path) metrics.total_path += d;
  result.final_map = std::move(map);
  return result;
}

CostResult cost_metric(const std::vector<EpisodeMetrics>& batch) {
  if (batch.empty()) throw std::domain_error("cost_metric: empty batch");
  CostResult res;
  res.cost.assign(batch.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::size_t> included;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].completed)
      included.push_back(i);
    else
      res.excluded.push_back(static_cast<int>(i));
  }
  if (included.empty()) return res;
  double it_lo = allocation::kInfinity, it_hi = -allocation::kInfinity;
  double pl_lo = allocation::kInfinity, pl_hi = -allocation::kInfinity;
  for (std::size_t i : included) {
    it_lo = std::min(it_lo, static_cast<double>(batch[i].iterations));
    it_hi = std::max(it_hi, static_cast<double>(batch[i].iterations));
    pl_lo = std::min(pl_lo, batch[i].total_path);
    pl_hi = std::max(pl_hi, batch[i].total_path);
  }
  const double it_range = it_hi - it_lo, pl_range = pl_hi - pl_lo;
  res.degenerate = included.size() < 2 || (it_range == 0.0 && pl_range == 0.0);
  for (std::size_t i : included) {
    const double ni =
        it_range > 0.0 ? (static_cast<double>(batch[i].iterations) - it_lo) / it_range : 0.0;
    const double np = pl_range > 0.0 ? (batch[i].total_path - pl_lo) / pl_range : 0.0;
    res.cost[i] = ni + np;
  }
  return res;
}

std::string SweepResult::to_csv() const {
  std::ostringstream os;
  os << "seed,alpha_lo,alpha_hi,radius,noise,robots,iterations,completed,total_path,cost,"
        "final_entropy,initial_entropy\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const SweepRow& r : rows) {
    os << r.seed << ',' << num(r.alpha_lo) << ',' << num(r.alpha_hi) << ',' << num(r.radius)
       << ',' << r.noise << ',' << r.robots << ',' << r.iterations << ','
       << (r.completed ? 1 : 0) << ',' << num(r.total_path) << ',' << num(r.cost) << ','
       << num(r.final_entropy) << ',' << num(r.initial_entropy) << '\n';
  }
  return os.str();
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.alpha_ranges.empty() || spec.radii.empty() || spec.noises.empty() || spec.trials < 1)
    throw std::domain_error("run_sweep: empty sweep lists");
  struct Job {
    SimConfig config;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t ai = 0; ai < spec.alpha_ranges.size(); ++ai)
    for (std::size_t ri = 0; ri < spec.radii.size(); ++ri)
      for (std::size_t ni = 0; ni < spec.noises.size(); ++ni)
        for (int trial = 0; trial < spec.trials; ++trial) {
          SimConfig c = spec.base;
          c.alpha_lo = spec.alpha_ranges[ai].first;
          c.alpha_hi = spec.alpha_ranges[ai].second;
          c.sensing_radius = spec.radii[ri];
          c.noise = spec.noises[ni];
          c.seed = Rng::mix(spec.base.seed,
                            {static_cast<std::uint64_t>(ai), static_cast<std::uint64_t>(ri),
                             static_cast<std::uint64_t>(ni), static_cast<std::uint64_t>(trial)});
          jobs.push_back({c, c.seed});
        }

  std::vector<EpisodeMetrics> metrics(jobs.size());
  const int workers = std::max(1, spec.jobs);
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j)
      metrics[j] = run_episode(jobs[j].config).metrics;
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int wkr = 0; wkr < workers; ++wkr)
      pool.emplace_back([&] {
        for (std::size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1))
          metrics[j] = run_episode(jobs[j].config).metrics;
      });
    for (auto& th : pool) th.join();
  }

  const auto costs = cost_metric(metrics);
  SweepResult out;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& c = jobs[j].config;
    const auto& m = metrics[j];
    out.rows.push_back({jobs[j].seed, c.alpha_lo, c.alpha_hi, c.sensing_radius, c.noise,
                        c.robots, m.iterations, m.completed, m.total_path, costs.cost[j],
                        m.final_entropy, m.initial_entropy});
  }
  return out;
}

}  // namespace behex::sim
