#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dipole/analytic_spectrum.hpp"

using namespace dipole;
using std::numbers::pi;

namespace {

SystemParams unit(int ell = 0) {
  SystemParams p;
  p.ell = ell;
  return p;
}

SystemParams random_bound(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.4, 2.5);
  for (;;) {
    SystemParams p;
    p.m = u(rng);
    p.alpha = u(rng);
    p.rho0 = u(rng);
    p.r0 = u(rng);
    p.ell = static_cast<int>(rng() % 3);
    if (derived(p).bound_regime) return p;
  }
}

} // namespace

TEST(Quantization, UnitParamsS) {
  // 8 e^{pi/(4 sqrt 2) - 2} e^{-pi/sqrt 2} - 4, evaluated with mpmath
  const QuantizationRoot q = solve_quantization(unit(0), 1);
  EXPECT_NEAR(q.bracket, -3.795387955797957, 1e-13);
  EXPECT_NEAR(q.x0, 2 * q.bracket, 1e-15);
}

TEST(Quantization, BracketRatio) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const SystemParams p = random_bound(rng);
    const DerivedQuantities d = derived(p);
    const double q = std::exp(-pi / *d.nu);
    for (int n = 1; n < 10; ++n) {
      const double a = solve_quantization(p, n).bracket, b = solve_quantization(p, n + 1).bracket;
      // bracket + delta cancels once the product falls far below delta
      const double tol = 1e-12 * (b + d.delta) + 8 * std::numeric_limits<double>::epsilon() * (d.delta + std::abs(a) + std::abs(b));
      EXPECT_NEAR(b + d.delta, q * (a + d.delta), tol);
    }
  }
}

TEST(Quantization, SelfConsistency) {
  // Frozen problems with a small wall have x0 > 0; put x0 back into the implicit relation.
  const SystemParams p = unit(0);
  const RadialProblem rp = frozen_problem(p, 1e-3);
  for (int n = 1; n <= 2; ++n) {
    const EnergyLevel lv = energy_level(rp, n);
    ASSERT_TRUE(lv.tau_positive);
    const double tau = lv.bracket;
    const double beta = 0.5 + rp.delta / (2 * tau);
    const double rhs = 4 * rp.nu * rp.nu / beta * std::exp(pi / (4 * rp.nu) - 2.0) * std::exp(-n * pi / rp.nu);
    EXPECT_NEAR(lv.x0, rhs, 1e-12 * lv.x0);
  }
}

TEST(Quantization, RegimeError) {
  EXPECT_THROW(solve_quantization(unit(2), 1), regime_error);
  EXPECT_THROW(energy_level(unit(2), 1), regime_error);
  EXPECT_THROW(spectrum(unit(2), 3), regime_error);
  EXPECT_THROW(solve_quantization(unit(0), 0), argument_error);
}

TEST(EnergyLevelTest, UnitParams) {
  const EnergyLevel s = energy_level(unit(0), 1);
  EXPECT_NEAR(s.energy, -8.202484867508099, 1e-12);
  EXPECT_FALSE(s.tau_positive);
  // ell = 1, nu = 1: 4 e^{pi/4 - 2} e^{-pi} - 4 (mpmath)
  const EnergyLevel p = energy_level(unit(1), 1);
  EXPECT_NEAR(p.bracket, -3.948691565703029, 1e-13);
  EXPECT_NEAR(p.energy, -8.796082540527118, 1e-12);
  EXPECT_FALSE(p.tau_positive);
}

TEST(EnergyLevelTest, RegroupedFormAndFlags) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 30; ++t) {
    const SystemParams p = random_bound(rng);
    const DerivedQuantities d = derived(p);
    for (int n = 1; n <= 8; ++n) {
      const EnergyLevel lv = energy_level(p, n, 0.05);
      EXPECT_EQ(lv.bracket, solve_quantization(p, n).bracket);
      EXPECT_NEAR(lv.energy, -lv.bracket * lv.bracket / (2 * p.m) - d.v_inf, 1e-12 * std::abs(lv.energy));
      EXPECT_EQ(lv.tau_positive, lv.bracket > 0);
      EXPECT_EQ(lv.x0_small, 2 * lv.bracket * p.r0 < 0.05);
      if (lv.tau_positive) EXPECT_LT(lv.energy, -d.v_inf);
      EXPECT_LT(lv.energy, 0);
    }
  }
}

TEST(EnergyLevelTest, PhysicalBracketAlwaysNegative) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const SystemParams p = random_bound(rng);
    for (int n = 1; n <= 5; ++n) EXPECT_LT(energy_level(p, n).bracket, 0.0);
  }
}

TEST(Accumulation, Values) {
  EXPECT_DOUBLE_EQ(accumulation_energy(unit(0)), -9.0);
  EXPECT_DOUBLE_EQ(accumulation_energy(unit(1)), -9.0);
  SystemParams p = unit(0);
  p.ell = 7;  // outside the bound regime, but the formula has no ell
  EXPECT_DOUBLE_EQ(accumulation_energy(p), -9.0);
}

TEST(Accumulation, GeometricApproach) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 20; ++t) {
    const SystemParams p = random_bound(rng);
    const double eacc = accumulation_energy(p);
    const double q = std::exp(-pi / *derived(p).nu);
    const auto lv = spectrum(p, 16);
    ASSERT_EQ(lv.size(), 16u);
    const double delta = derived(p).delta;
    const double p1 = lv[0].bracket + delta;
    for (int n = 1; n <= 15; ++n) {
      const double prev = lv[n - 1].energy - eacc;
      if (std::abs(prev) < 1e-6 * std::abs(eacc)) break;
      // E_n - E_acc = (delta - b)(delta + b) / 2m, with delta + b = p1 q^(n-1)
      const double pn = p1 * std::pow(q, n - 1);
      const double expect = q * (2 * delta - pn * q) / (2 * delta - pn);
      const double r = (lv[n].energy - eacc) / prev;
      EXPECT_NEAR(r, expect, 1e-9 + 1e-13 * std::abs(eacc / prev)) << n;
      EXPECT_LE(std::abs(r - q), q * pn / delta + 1e-9 + 1e-13 * std::abs(eacc / prev));
    }
    for (int n = 1; n < 16; ++n) EXPECT_LE(std::abs(lv[n].energy - eacc), std::abs(lv[n - 1].energy - eacc));
  }
}

TEST(Accumulation, OffsetMatchesDifference) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 20; ++t) {
    const SystemParams p = random_bound(rng);
    const double eacc = accumulation_energy(p);
    for (int n = 1; n <= 3; ++n) {
      const double diff = energy_level(p, n).energy - eacc;
      EXPECT_NEAR(accumulation_offset(p, n), diff, 1e-13 * std::abs(eacc));
    }
    // far up the sequence the offset keeps shrinking by the product ratio
    const double q = std::exp(-pi / *derived(p).nu);
    EXPECT_GT(accumulation_offset(p, 40), 0.0);
    EXPECT_NEAR(accumulation_offset(p, 41) / accumulation_offset(p, 40), q, 1e-3 * q);
  }
  EXPECT_THROW(accumulation_offset(unit(2), 1), regime_error);
}

TEST(SwaveBoundsTest, UnitParams) {
  const SwaveBounds b = swave_bounds(unit(0));
  EXPECT_DOUBLE_EQ(b.upper, accumulation_energy(unit(0)));
  EXPECT_NEAR(b.lower, -6.555652031098436, 1e-12);
  EXPECT_NEAR(b.lower_from_levels, -8.202484867508099, 1e-12);
  EXPECT_FALSE(b.ordered);
}

TEST(SwaveBoundsTest, PrintedFormCoincidesWithLevelWhenCouplingIsOne) {
  SystemParams p = unit(0);
  p.m = 0.5;  // 2 m alpha rho0^2 r0^4 = 1
  const SwaveBounds b = swave_bounds(p);
  EXPECT_NEAR(b.lower, b.lower_from_levels, 1e-12 * std::abs(b.lower));
}

TEST(SmallxRadial, ZeroAndDefinition) {
  const RadialProblem rp = frozen_problem(unit(0), 1e-4);
  for (int n = 1; n <= 3; ++n) {
    const EnergyLevel lv = energy_level(rp, n);
    ASSERT_TRUE(lv.tau_positive);
    const double kp = rp.delta / (2 * lv.bracket);
    const double amp = 2 * std::exp(specfun::smallx_log_amplitude(kp, rp.nu));
    EXPECT_LE(std::abs(smallx_radial(kp, rp.nu, lv.x0)), 1e-10 * amp);
  }
  for (double x : {1e-5, 1e-2, 0.3})
    EXPECT_NEAR(smallx_radial(2.0, 1.0, x), specfun::whittaker_w_smallx(2.0, 1.0, x) / std::sqrt(x), 1e-13);
}

TEST(SmallxRadial, HandPoint) {
  // kappa = 2, nu = 1, beta = 5/2, x = e^{-2} 4/beta: ln(beta x / 4) = -2, so the
  // argument is 2 - 2 + pi/4 and the value is 2A cos(pi/4).
  const double beta = 2.5;
  const double a = std::exp(-pi + beta) / (std::sqrt(2.0) * std::pow(beta, beta - 0.5));
  const double x = std::exp(-2.0) * 4.0 / beta;
  EXPECT_NEAR(smallx_radial(2.0, 1.0, x), 2 * a * std::cos(pi / 4), 1e-14);
}

TEST(SpectrumTest, CountAndSign) {
  const auto lv = spectrum(unit(0), 7);
  ASSERT_EQ(lv.size(), 7u);
  for (int i = 0; i < 7; ++i) {
    EXPECT_EQ(lv[i].n, i + 1);
    EXPECT_LT(lv[i].energy, 0);
    EXPECT_FALSE(lv[i].tau_positive);
  }
  EXPECT_THROW(spectrum(unit(0), 0), argument_error);
}

TEST(CutoffScan, FrozenReading) {
  const SystemParams p = unit(0);
  const DerivedQuantities d = derived(p);
  std::vector<double> walls;
  for (int k = 0; k <= 20; ++k) walls.push_back(std::ldexp(1.0, -k));
  const auto pts = cutoff_scan(d, p.m, walls);
  ASSERT_EQ(pts.size(), walls.size());
  const double c = 4 * 2.0 * std::exp(pi / (4 * std::sqrt(2.0)) - 2.0 - pi / std::sqrt(2.0));
  bool seen_positive = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_NEAR(pts[i].bracket, c / walls[i] - 4.0, 1e-12 * std::abs(c / walls[i]));
    EXPECT_EQ(pts[i].tau_positive, pts[i].bracket > 0);
    if (seen_positive) {
      ASSERT_TRUE(pts[i].tau_positive);
      EXPECT_LT(pts[i].energy, pts[i - 1].energy);
    }
    seen_positive = seen_positive || pts[i].tau_positive;
  }
  EXPECT_TRUE(seen_positive);
  // dominant term: E ~ -(c / r_wall)^2 / 2m, first correction -8 r_wall / c
  const double rw = walls.back();
  EXPECT_NEAR(pts.back().energy / (-(c * c) / (2 * rw * rw)), 1.0 - 8 * rw / c, 1e-9);
  EXPECT_THROW(cutoff_scan(d, p.m, std::vector<double>{}), argument_error);
  EXPECT_THROW(cutoff_scan(derived(unit(2)), 1.0, walls), regime_error);
}

TEST(CutoffScan, CollapsingReading) {
  std::vector<double> walls;
  for (int k = 0; k <= 20; ++k) walls.push_back(std::ldexp(1.0, -k));
  const auto pts = cutoff_scan_collapsing(unit(0), walls);
  // ell = 0 stays in the bound regime for every r0 (nu^2 = 2 r0^4).
  for (const auto& pt : pts) {
    ASSERT_TRUE(std::isfinite(pt.energy));
    EXPECT_LT(pt.energy, 0);
    EXPECT_GT(pt.energy, -9.0 - 1e-9);  // does not diverge
  }
  const auto lp = cutoff_scan_collapsing(unit(1), walls);
  EXPECT_TRUE(std::isnan(lp[1].energy));  // 2 r0^4 = 1/8 < 1
}
