#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dipole/eigensolver.hpp"

using namespace dipole;

namespace {

SystemParams unit(int ell = 0) {
  SystemParams p;
  p.ell = ell;
  return p;
}

// Frozen coefficients with the wall well inside r0: two levels below -v_inf.
const RadialProblem& frozen_unit() {
  static const RadialProblem rp = frozen_problem(unit(0), 1e-3);
  return rp;
}

const std::vector<RadialSolution>& frozen_levels() {
  static const std::vector<RadialSolution> sols = shooting_eigenvalues(frozen_unit(), {-1e5, -1.0001}, 10);
  return sols;
}

} // namespace

TEST(CountSignChanges, SkipsZeros) {
  EXPECT_EQ(count_sign_changes({0, 1, 0, -1, -2, 0, 3}), 2);
  EXPECT_EQ(count_sign_changes({}), 0);
  EXPECT_EQ(count_sign_changes({0, 0}), 0);
}

TEST(Shoot, SeedMatchesAsymptotic) {
  const RadialProblem& rp = frozen_unit();
  const double e = -500.0;
  const double tau = rp.tau(e);
  const double r_max = rp.r_wall + 25.0 / tau;
  const RadialSolution sol = shoot(rp, e, r_max, 20000);
  const std::size_t i = sol.start_index;
  const double x = 2 * tau * sol.grid[i];
  const double kappa = rp.kappa(tau);
  const double log_seed = -0.5 * x - (kappa + 0.5) * std::log(x);
  EXPECT_NEAR(std::log(std::abs(sol.values[i])) + sol.log_scale, log_seed, 1e-12 * std::abs(log_seed));
}

TEST(Shoot, MatchesWhittakerUpToScale) {
  // Unfrozen, unit parameters: g(r) = W_{-kappa, i nu}(2 tau r) / sqrt(2 tau r).
  const RadialProblem rp = radial_problem(unit(0));
  const double e = -3.0;
  const double tau = rp.tau(e);
  const RadialSolution sol = shoot(rp, e, 1.0 + 40.0 / tau, 20000);
  const double kappa = rp.kappa(tau);
  std::vector<double> ratio;
  // the seed's error is recessive inward; stay 10 / tau clear of it
  const double r_far = sol.grid[sol.start_index] - 10.0 / tau;
  for (std::size_t i = 0; sol.grid[i] < r_far; i += 500) {
    const double x = 2 * tau * sol.grid[i];
    const auto w = specfun::whittaker_w_imag_scaled({-kappa, rp.nu, x});
    ratio.push_back(std::log(std::abs(sol.values[i])) + sol.log_scale - (w.log_abs() - 0.5 * std::log(x)));
    EXPECT_EQ(sol.values[i] > 0, w.mantissa > 0);
  }
  ASSERT_GT(ratio.size(), 5u);
  for (double r : ratio) EXPECT_NEAR(r, ratio.front(), 1e-6);
}

TEST(Shoot, StepDoublingConvergence) {
  const RadialProblem& rp = frozen_unit();
  const double e = -170.0;
  const double r_max = rp.r_wall + 25.0 / rp.tau(e);
  const auto a = shoot_boundary(rp, e, r_max, 40000);
  const auto b = shoot_boundary(rp, e, r_max, 80000);
  const auto c = shoot_boundary(rp, e, r_max, 160000);
  auto v = [](const specfun::ScaledReal& s) { return s.value(); };
  const double d1 = std::abs(v(a) - v(b)), d2 = std::abs(v(b) - v(c));
  EXPECT_LE(d1 / std::abs(v(c)), 1e-8);
  // Observed order of RK4
  const auto a2 = shoot_boundary(rp, e, r_max, 4000);
  const auto b2 = shoot_boundary(rp, e, r_max, 8000);
  const auto c2 = shoot_boundary(rp, e, r_max, 16000);
  const double order = std::log2(std::abs(v(a2) - v(b2)) / std::abs(v(b2) - v(c2)));
  EXPECT_NEAR(order, 4.0, 0.3);
  (void)d2;
}

TEST(Shoot, Preconditions) {
  const RadialProblem rp = radial_problem(unit(0));
  EXPECT_THROW(shoot(rp, -0.5, 100.0, 5000), imaginary_tau_error);
  EXPECT_THROW(shoot(rp, -3.0, 100.0, 500), argument_error);
  EXPECT_THROW(shoot(rp, -3.0, 5.0, 5000), argument_error);  // tau r_max < 20
}

TEST(Shoot, RescalingKeepsValuesFinite) {
  // Deep level: g grows by ~e^{hundreds} across the sweep.
  const RadialProblem& rp = frozen_unit();
  const double e = -2e4;
  const RadialSolution sol = shoot(rp, e, rp.r_wall + 25.0 / rp.tau(e), 20000);
  for (double v : sol.values) ASSERT_TRUE(std::isfinite(v));
  EXPECT_TRUE(std::isfinite(sol.log_scale));
}

TEST(Normalize, Contract) {
  const RadialProblem& rp = frozen_unit();
  RadialSolution sol = shoot(rp, -300.0, rp.r_wall + 25.0 / rp.tau(-300.0), 10000);
  const RadialSolution a = normalize(sol);
  EXPECT_NEAR(a.norm, 1.0, 1e-8);
  const RadialSolution b = normalize(a);
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-12 * std::abs(a.values[i]) + 1e-300);
  RadialSolution scaled = sol;
  for (double& v : scaled.values) v *= 7.0;
  scaled.norm *= 49.0;
  const RadialSolution c = normalize(scaled);
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], c.values[i], 1e-13 * std::abs(a.values[i]) + 1e-300);
  RadialSolution zero = sol;
  for (double& v : zero.values) v = 0;
  zero.norm = 0;
  EXPECT_THROW(normalize(zero), accuracy_error);
}

TEST(Eigen, FrozenCrossOracle) {
  const auto& sols = frozen_levels();
  const auto wroots = wroot_eigenvalues(frozen_unit(), {-1e5, -1.0001}, 10);
  ASSERT_EQ(sols.size(), 2u);
  ASSERT_EQ(wroots.size(), 2u);
  for (std::size_t i = 0; i < sols.size(); ++i) {
    EXPECT_LE(std::abs(sols[i].energy - wroots[i]) / std::abs(wroots[i]), 1e-6);
    EXPECT_EQ(sols[i].node_count, static_cast<int>(i));
    EXPECT_LE(sols[i].boundary_residual, 1e-8);
    EXPECT_EQ(sols[i].values.front(), 0.0);
    EXPECT_NEAR(sols[i].norm, 1.0, 1e-8);
    EXPECT_LE(sols[i].refinement_delta, 1e-8);
  }
  EXPECT_LT(sols[0].energy, sols[1].energy);
}

TEST(Eigen, WrootResidual) {
  for (double e : wroot_eigenvalues(frozen_unit(), {-1e5, -1.0001}, 10)) {
    // |F(E)| small against F nearby
    const auto f0 = wall_whittaker(frozen_unit(), e);
    const auto f1 = wall_whittaker(frozen_unit(), e * (1 + 1e-4));
    EXPECT_LE(std::exp(f0.log_abs() - f1.log_abs()), 1e-6);
  }
}

TEST(Eigen, AnalyticAgreementImprovesWithSmallX0) {
  // n = 2 has x0 ~ 0.04, n = 1 has x0 ~ 0.4: the closed form is closer for n = 2.
  const auto& sols = frozen_levels();
  const double d1 = std::abs(energy_level(frozen_unit(), 1).energy / sols[0].energy - 1);
  const double d2 = std::abs(energy_level(frozen_unit(), 2).energy / sols[1].energy - 1);
  EXPECT_LT(d2, d1);
  EXPECT_LT(d2, 1e-2);
}

TEST(Eigen, Orthogonality) {
  const auto& sols = frozen_levels();
  ASSERT_GE(sols.size(), 2u);
  EXPECT_NEAR(overlap(sols[0], sols[0]), 1.0, 1e-8);
  EXPECT_LE(std::abs(overlap(sols[0], sols[1])), 1e-6);
}

TEST(Eigen, DecayOnOuterGrid) {
  for (const auto& s : frozen_levels()) {
    const double tau = frozen_unit().tau(s.energy);
    const std::size_t n = s.grid.size();
    std::size_t j = n - 1;
    while (j > 0 && s.values[j] == 0.0) --j;  // tail may underflow
    ASSERT_GT(j, n / 2);
    for (std::size_t i = j - j / 10; i < j; ++i) {
      // |g(r_j)| e^{tau (r_j - r)} bounds |g(r)| up to the algebraic prefactor
      const double bound = std::abs(s.values[j]) * std::exp(tau * (s.grid[j] - s.grid[i])) *
                           std::pow(s.grid[j] / s.grid[i], frozen_unit().kappa(tau) + 0.5);
      EXPECT_LE(std::abs(s.values[i]), bound * (1 + 1e-6));
      EXPECT_LE(std::abs(s.values[i + 1]), std::abs(s.values[i]));
    }
  }
}

TEST(Eigen, PhysicalProblemHasNoLevelsBelowAsymptote) {
  for (int ell : {0, 1}) {
    const RadialProblem rp = radial_problem(unit(ell));
    EXPECT_TRUE(wroot_eigenvalues(rp, {-50, -1.0001}, 10).empty());
    EXPECT_TRUE(shooting_eigenvalues(rp, {-50, -1.0001}, 10).empty());
  }
}

TEST(Eigen, WindowErrors) {
  const RadialProblem rp = radial_problem(unit(0));
  EXPECT_THROW(wroot_eigenvalues(rp, {-5, -0.5}, 3), argument_error);
  EXPECT_THROW(shooting_eigenvalues(rp, {-2, -3}, 3), argument_error);
  EXPECT_THROW(wroot_eigenvalues(unit(2), {-5, -2}, 3), regime_error);
}

TEST(Eigen, MaxCount) {
  EXPECT_EQ(wroot_eigenvalues(frozen_unit(), {-1e5, -1.0001}, 1).size(), 1u);
  SolverOptions opt;
  opt.refine_check = false;
  EXPECT_EQ(shooting_eigenvalues(frozen_unit(), {-1e5, -1.0001}, 1, opt).size(), 1u);
}

TEST(Selfcheck, PassesAndIsDeterministic) {
  const auto a = integrator_selfcheck();
  const auto b = integrator_selfcheck();
  EXPECT_TRUE(a.pass);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].max_rel_dev, b.rows[i].max_rel_dev);
    EXPECT_LE(a.rows[i].max_rel_dev, 1e-7) << a.rows[i].function << " " << a.rows[i].kappa;
  }
}

TEST(Compare, FrozenReport) {
  const auto rep = compare(frozen_unit(), 4, {-1e5, -1.0001});
  EXPECT_TRUE(rep.summary.bound_state_found);
  EXPECT_EQ(rep.summary.paired, 2);
  EXPECT_LE(rep.summary.max_rel_dev_ws, 1e-6);
  int invalid = 0, matched = 0;
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.rel_dev_ws.has_value(), r.e_wroot.has_value() && r.e_shoot.has_value());
    EXPECT_EQ(r.rel_dev_aw.has_value(), r.e_analytic.has_value() && (r.e_wroot || r.e_shoot));
    if (r.flags.find("formula-invalid") != std::string::npos) {
      ++invalid;
      EXPECT_FALSE(r.e_wroot.has_value());
      EXPECT_FALSE(r.e_shoot.has_value());
    }
    if (r.e_analytic && r.e_shoot) ++matched;
  }
  EXPECT_EQ(invalid, 2);
  EXPECT_EQ(matched, 2);
}

TEST(Compare, PhysicalReportIsEmpty) {
  const auto rep = compare(radial_problem(unit(0)), 5, {-50, -1.0001});
  EXPECT_FALSE(rep.summary.bound_state_found);
  EXPECT_EQ(rep.summary.formula_invalid, 5);
  bool noted = false;
  for (const auto& n : rep.summary.notes) noted = noted || n == "no bound states found in window";
  EXPECT_TRUE(noted);
  for (const auto& r : rep.rows) EXPECT_NE(r.flags.find("formula-invalid"), std::string::npos);
}

TEST(Compare, DefaultWindowBelowAsymptote) {
  const RadialProblem rp = radial_problem(unit(0));
  const EnergyWindow w = default_window(rp);
  EXPECT_LT(w.lo, w.hi);
  EXPECT_LT(w.hi, -rp.v_inf);
  EXPECT_LT(w.lo, -9.0);
  EXPECT_GT(w.hi, -8.21);
}
