// Acceptance suite: one line per criterion, exit code = number of failures.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "behex/allocation.hpp"
#include "behex/checks.hpp"
#include "behex/dro.hpp"
#include "behex/entropy.hpp"
#include "behex/rng.hpp"
#include "behex/sim.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int index, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << index << " " << name << ": " << detail
            << std::endl;
  if (!pass) ++g_failures;
}

// ---- criterion 1: entropy identities ----
void criterion_entropy() {
  const auto t0 = Clock::now();
  using namespace behex::entropy;
  double worst_shannon = 0.0;
  const auto p1 = BehaviorParam::from_alpha(1.0);
  for (int k = 0; k <= 10000; ++k) {
    const double p = k / 10000.0;
    worst_shannon = std::max(worst_shannon,
                             std::abs(behavioral_entropy(p, p1) - oracles::shannon(p)));
  }
  double worst_half = 0.0;
  for (double a : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0})
    worst_half = std::max(
        worst_half, std::abs(behavioral_entropy(0.5, BehaviorParam::from_alpha(a)) -
                             0.6931471805599453));
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "max |H_1 - Shannon| = " << worst_shannon << " (<= 1e-12), max |H(0.5) - log2| = "
     << worst_half << " (<= 1e-9), " << secs << " s (< 1 s)";
  report(1, "entropy-identities", worst_shannon <= 1e-12 && worst_half <= 1e-9 && secs < 1.0,
         os.str());
}

// ---- criterion 2: allocation oracle equivalence ----
void criterion_allocation() {
  const auto t0 = Clock::now();
  const auto r = behex::checks::check_allocation_oracle(200, 20240801);
  const double secs = seconds_since(t0);
  report(2, "allocation-oracle", r.pass && secs < 30.0,
         r.detail + ", " + std::to_string(secs) + " s (< 30 s)");
}

// ---- criterion 3: noisy band convergence ----
void criterion_noisy_band() {
  const auto r = behex::checks::check_noisy_band(200, 20240801, 0.95);
  report(3, "noisy-band", r.pass, r.detail);
}

// ---- criterion 4: consensus stabilization ----
void criterion_consensus() {
  const auto r = behex::checks::check_consensus_stabilization(20240801);
  report(4, "consensus-stabilization", r.pass, r.detail);
}

// ---- criterion 5: DRO coverage + LP oracle agreement ----
void criterion_dro() {
  const auto t0 = Clock::now();
  const auto coverage = behex::checks::check_dro_coverage(20240801, 1000);

  behex::Rng rng(555);
  int lp_ok = 0;
  const int kInstances = 50, kGrid = 41;
  for (int inst = 0; inst < kInstances; ++inst) {
    behex::dro::EmpiricalDistribution emp;
    emp.lo = 0.0;
    emp.hi = 1.0;
    const int n = rng.uniform_int(1, 6);
    for (int k = 0; k < n; ++k) emp.atoms.push_back(rng.uniform());
    const double eps = rng.uniform(0.0, 1.2);
    const double tol = 1.0 / (kGrid - 1) + 1e-9;
    const bool sup_ok = std::abs(behex::dro::sup_mean_ball(emp, eps) -
                                 oracles::lp_sup_mean(emp.atoms, 0.0, 1.0, eps, kGrid)) <= tol;
    const bool inf_ok = std::abs(behex::dro::inf_mean_ball(emp, eps) -
                                 oracles::lp_inf_mean(emp.atoms, 0.0, 1.0, eps, kGrid)) <= tol;
    if (sup_ok && inf_ok) ++lp_ok;
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << coverage.detail << "LP agreement " << lp_ok << "/" << kInstances << ", " << secs
     << " s (< 60 s)";
  report(5, "dro-coverage", coverage.pass && lp_ok == kInstances && secs < 60.0, os.str());
}

// ---- criterion 6: Lemma 5.1 certificate ----
void criterion_lemma() {
  const auto r = behex::checks::check_lemma_certificate(20240801);
  report(6, "lemma-certificate", r.pass, r.detail);
}

// ---- criterion 7: Prop 5.2 certificate ----
void criterion_prop() {
  const auto r = behex::checks::check_prop_certificate(20240801);
  report(7, "prop-distinctness", r.pass, r.detail);
}

// ---- criterion 8: end-to-end desk-scale episodes ----
void criterion_episode() {
  const auto t0 = Clock::now();
  int completed = 0, trace_ok = 0, partition_ok = 0;
  const int kSeeds = 10;
  for (int s = 0; s < kSeeds; ++s) {
    behex::sim::SimConfig cfg;
    cfg.map_kind = "rooms";
    cfg.map_width = 40;
    cfg.map_height = 40;
    cfg.robots = 3;
    cfg.alpha_lo = 0.8;
    cfg.alpha_hi = 1.2;
    cfg.sensing_radius = 2.0;
    cfg.noise = 0;
    cfg.completion_fraction = 0.99;
    cfg.tick_cap = 500;
    cfg.seed = 9000 + s;
    const auto r = behex::sim::run_episode(cfg);
    if (r.metrics.completed) ++completed;
    bool mono = true;
    for (std::size_t t = 1; t < r.metrics.entropy_trace.size(); ++t)
      mono = mono && r.metrics.entropy_trace[t] <= r.metrics.entropy_trace[t - 1] + 1e-9;
    if (mono) ++trace_ok;
    if (r.partition_violations == 0) ++partition_ok;
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << completed << "/10 completed, " << trace_ok << "/10 non-increasing traces, "
     << partition_ok << "/10 legal partitions, " << secs << " s (< 120 s)";
  report(8, "episode-desk-scale",
         completed == kSeeds && trace_ok == kSeeds && partition_ok == kSeeds && secs < 120.0,
         os.str());
}

// ---- criterion 9: heterogeneity trend ----
void criterion_trend() {
  behex::sim::SweepSpec spec;
  spec.base.map_kind = "rooms";
  spec.base.map_width = 64;
  spec.base.map_height = 64;
  spec.base.robots = 4;
  spec.base.sensing_radius = 2.0;
  spec.base.noise = 2;
  spec.base.completion_fraction = 0.99;
  spec.base.tick_cap = 800;
  spec.base.seed = 424242;
  spec.alpha_ranges = {{0.3, 0.7}, {0.8, 1.2}, {2.0, 4.0}};
  spec.radii = {2.0};
  spec.noises = {2};
  spec.trials = 10;
  spec.jobs = 4;
  const auto sweep = behex::sim::run_sweep(spec);

  double iters[3] = {0, 0, 0}, paths[3] = {0, 0, 0};
  int counts[3] = {0, 0, 0}, incomplete = 0;
  for (const auto& row : sweep.rows) {
    int range = row.alpha_lo == 0.3 ? 0 : (row.alpha_lo == 0.8 ? 1 : 2);
    if (!row.completed) {
      ++incomplete;
      continue;
    }
    iters[range] += row.iterations;
    paths[range] += row.total_path;
    ++counts[range];
  }
  std::ostringstream os;
  bool have_all = counts[0] > 0 && counts[1] > 0 && counts[2] > 0;
  bool pass = have_all;
  if (have_all) {
    for (int r = 0; r < 3; ++r) {
      iters[r] /= counts[r];
      paths[r] /= counts[r];
    }
    const bool mixed_faster = iters[1] < iters[0];
    const bool high_faster = iters[2] < iters[0];
    const bool high_longest_path = paths[2] > paths[0] && paths[2] > paths[1];
    pass = mixed_faster && high_faster && high_longest_path;
    os << "mean iterations low/mixed/high = " << iters[0] << "/" << iters[1] << "/" << iters[2]
       << ", mean path = " << paths[0] << "/" << paths[1] << "/" << paths[2] << ", "
       << incomplete << " incomplete";
  } else {
    os << "missing completed episodes in some range (" << incomplete << " incomplete)";
  }
  report(9, "heterogeneity-trend", pass, os.str());
}

// ---- criterion 10: byte-identical CLI artifacts ----
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism() {
  const char* cli = std::getenv("BEHEX_CLI");
  if (!cli) {
    report(10, "cli-determinism", false, "BEHEX_CLI not set; cannot exercise the binary");
    return;
  }
  const fs::path dir = fs::temp_directory_path() / "behex_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg_path = dir / "episode.cfg";
  {
    std::ofstream cfg(cfg_path);
    cfg << "[map]\nkind = rooms\nwidth = 32\nheight = 32\n\n"
           "[robots]\ncount = 2\nalpha_lo = 0.8\nalpha_hi = 1.2\n\n"
           "[sensing]\nradius = 2\nnoise = 0\n\n"
           "[episode]\nseed = 777\ntick_cap = 300\n\n"
           "[sweep]\nalpha_ranges = 0.8:1.2 2:3\nradii = 1\nnoises = 0\ntrials = 2\n";
  }
  auto run_cli = [&](const std::string& args, const fs::path& out) {
    std::ostringstream cmd;
    cmd << '"' << cli << "\" " << args << " --config \"" << cfg_path.string() << "\" --out \""
        << out.string() << "\" > \"" << (out.string() + ".stdout") << "\" 2>/dev/null";
    return std::system(cmd.str().c_str());
  };
  const int rc1 = run_cli("run --snapshot-every 5", dir / "run1");
  const int rc2 = run_cli("run --snapshot-every 5", dir / "run2");
  const int rs1 = run_cli("sweep --jobs 2", dir / "sweep1");
  const int rs2 = run_cli("sweep --jobs 1", dir / "sweep2");

  bool pass = rc1 == 0 && rc2 == 0 && rs1 == 0 && rs2 == 0;
  std::string detail;
  if (!pass) {
    detail = "CLI exit codes: run " + std::to_string(rc1) + "/" + std::to_string(rc2) +
             ", sweep " + std::to_string(rs1) + "/" + std::to_string(rs2);
  } else {
    int files = 0;
    for (const auto& entry : fs::directory_iterator(dir / "run1")) {
      const auto name = entry.path().filename();
      if (slurp(entry.path()) != slurp(dir / "run2" / name)) {
        pass = false;
        detail = "mismatch in " + name.string();
        break;
      }
      ++files;
    }
    if (pass && slurp(dir / "sweep1" / "sweep.csv") != slurp(dir / "sweep2" / "sweep.csv")) {
      pass = false;
      detail = "sweep.csv differs between --jobs 2 and --jobs 1";
    }
    if (pass)
      detail = std::to_string(files) + " run artifacts plus sweep.csv byte-identical "
               "across invocations";
  }
  report(10, "cli-determinism", pass, detail);
  if (pass) fs::remove_all(dir);
}

}  // namespace

int main() {
  std::cout << "behex acceptance suite" << std::endl;
  criterion_entropy();
  criterion_allocation();
  criterion_noisy_band();
  criterion_consensus();
  criterion_dro();
  criterion_lemma();
  criterion_prop();
  criterion_episode();
  criterion_trend();
  criterion_determinism();
  std::cout << (10 - g_failures) << "/10 criteria passed" << std::endl;
  return g_failures;
}
