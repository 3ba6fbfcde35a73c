#include <doctest.h>

#include <cmath>

#include "behex/dro.hpp"
#include "behex/rng.hpp"
#include "oracles.hpp"

using namespace behex::dro;

TEST_CASE("epsilon_radius branches") {
  ConcentrationParams p;
  p.theta = std::exp(-2.0);  // log(c1/theta) = 3 with c1 = e
  p.c1 = std::exp(1.0);
  p.c2 = 1.0;
  p.a = 2.0;
  CHECK(epsilon_radius(12, p) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(epsilon_radius(2, p) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
  CHECK_THROWS_AS(epsilon_radius(0, p), std::domain_error);
  ConcentrationParams bad;
  bad.theta = 1.5;
  CHECK_THROWS_AS(epsilon_radius(5, bad), std::domain_error);
}

TEST_CASE("ball mean bounds: closed forms") {
  EmpiricalDistribution emp{{0.0, 1.0}, 0.0, 1.0};
  CHECK(sup_mean_ball(emp, 0.0) == doctest::Approx(0.5));
  CHECK(inf_mean_ball(emp, 0.0) == doctest::Approx(0.5));
  CHECK(sup_mean_ball(emp, 0.2) == doctest::Approx(0.7));
  CHECK(inf_mean_ball(emp, 0.2) == doctest::Approx(0.3));
  CHECK(sup_mean_ball(emp, 5.0) == doctest::Approx(1.0));
  CHECK(dr_estimate(emp, 0.2) == doctest::Approx(0.5));

  EmpiricalDistribution mid{{0.5}, 0.0, 1.0};
  CHECK(inf_mean_ball(mid, 1.0) == doctest::Approx(0.0));

  EmpiricalDistribution high{{0.9}, 0.0, 1.0};
  CHECK(dr_estimate(high, 0.5) == doctest::Approx(0.7));
}

TEST_CASE("ball mean bounds match the transport-plan LP oracle") {
  behex::Rng rng(991);
  for (int inst = 0; inst < 50; ++inst) {
    const int n = rng.uniform_int(1, 6);
    EmpiricalDistribution emp;
    emp.lo = 0.0;
    emp.hi = 1.0;
    for (int k = 0; k < n; ++k) emp.atoms.push_back(rng.uniform());
    const double eps = rng.uniform(0.0, 1.2);
    const int grid = 41;
    const double tol = 1.0 / (grid - 1);  // grid resolution
    CHECK(std::abs(sup_mean_ball(emp, eps) -
                   oracles::lp_sup_mean(emp.atoms, 0.0, 1.0, eps, grid)) <= tol + 1e-9);
    CHECK(std::abs(inf_mean_ball(emp, eps) -
                   oracles::lp_inf_mean(emp.atoms, 0.0, 1.0, eps, grid)) <= tol + 1e-9);
  }
}

TEST_CASE("bound ordering and monotonicity in eps") {
  behex::Rng rng(123);
  for (int inst = 0; inst < 200; ++inst) {
    EmpiricalDistribution emp;
    emp.lo = rng.uniform(0.0, 0.3);
    emp.hi = emp.lo + rng.uniform(0.5, 2.0);
    const int n = rng.uniform_int(1, 8);
    for (int k = 0; k < n; ++k) emp.atoms.push_back(rng.uniform(emp.lo, emp.hi));
    const double mu = emp.mean();
    double prev_sup = mu, prev_inf = mu;
    for (double eps : {0.0, 0.1, 0.3, 0.9, 3.0}) {
      const double s = sup_mean_ball(emp, eps), i = inf_mean_ball(emp, eps);
      CHECK(i <= mu + 1e-12);
      CHECK(mu <= s + 1e-12);
      CHECK(s >= prev_sup - 1e-12);
      CHECK(i <= prev_inf + 1e-12);
      CHECK(s <= emp.hi + 1e-12);
      CHECK(i >= emp.lo - 1e-12);
      prev_sup = s;
      prev_inf = i;
    }
  }
}

TEST_CASE("separation_check") {
  CHECK(separation_check({{2.5, 3.5}, {0.5, 1.5}}) == 0);
  CHECK_FALSE(separation_check({{2.5, 3.5}, {3.0, 4.0}}).has_value());
  CHECK(separation_check({{1.0, 2.0}}) == 0);
  CHECK(separation_check({{0.5, 1.5}, {2.5, 3.5}, {0.1, 0.2}}) == 1);
}

TEST_CASE("wasserstein_1d") {
  EmpiricalDistribution a{{0.25, 0.5, 0.75}, 0.0, 1.0};
  CHECK(wasserstein_1d(a, a) == doctest::Approx(0.0));
  EmpiricalDistribution zero{{0.0}, 0.0, 1.0};
  EmpiricalDistribution one{{1.0}, 0.0, 1.0};
  CHECK(wasserstein_1d(zero, one) == doctest::Approx(1.0));
  EmpiricalDistribution ends{{0.0, 1.0}, 0.0, 1.0};
  EmpiricalDistribution mids{{0.5, 0.5}, 0.0, 1.0};
  CHECK(wasserstein_1d(ends, mids) == doctest::Approx(0.5));
  // Sorted-pairing equivalence for equal atom counts.
  behex::Rng rng(5);
  for (int inst = 0; inst < 30; ++inst) {
    const int n = rng.uniform_int(1, 7);
    EmpiricalDistribution u{{}, 0.0, 1.0}, v{{}, 0.0, 1.0};
    for (int k = 0; k < n; ++k) {
      u.atoms.push_back(rng.uniform());
      v.atoms.push_back(rng.uniform());
    }
    auto su = u.atoms, sv = v.atoms;
    std::sort(su.begin(), su.end());
    std::sort(sv.begin(), sv.end());
    double expect = 0.0;
    for (int k = 0; k < n; ++k) expect += std::abs(su[k] - sv[k]) / n;
    CHECK(wasserstein_1d(u, v) == doctest::Approx(expect).epsilon(1e-10));
  }
}
