#pragma once

// Closed-form spectrum of the hard-wall problem in the small-x0 regime:
// quantization x0 = (4 nu^2/beta) e^{pi/(4 nu) - 2} e^{-n pi/nu}, the level
// formula, the accumulation point and the wall-radius ("cutoff") scan.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "dipole/errors.hpp"
#include "dipole/model.hpp"
#include "dipole/specfun.hpp"

namespace dipole {

inline constexpr double default_x0_threshold = 0.1;

struct EnergyLevel {
  int n = 1;            // radial quantum number, n = -mu
  int ell = 0;
  double energy = 0;
  double bracket = 0;   // 4 nu^2 e^{pi/(4nu) - 2} e^{-n pi/nu} / r_wall - delta; tau when > 0
  double x0 = 0;        // 2 * bracket * r_wall
  bool tau_positive = false;
  bool x0_small = false;
};

struct QuantizationRoot {
  double x0 = 0;
  double bracket = 0;
};

struct SwaveBounds {
  double lower = 0;              // left side of the s-wave range exactly as printed
  double upper = 0;              // accumulation energy
  double lower_from_levels = 0;  // energy_level(ell = 0, n = 1)
  bool ordered = false;          // lower <= upper
};

struct CutoffPoint {
  double r_wall = 0;
  double energy = 0;   // frozen-coefficient reading
  double bracket = 0;
  bool tau_positive = false;
};

namespace detail {

// 4 nu^2 e^{pi/(4 nu) - 2} e^{-n pi / nu}: the value of beta * x0 / (2 r_wall) * 2
inline double quantized_product(double nu, int n) {
  constexpr double pi = std::numbers::pi;
  return 4.0 * nu * nu * std::exp(pi / (4.0 * nu) - 2.0 - n * pi / nu);
}

inline double level_energy(double m, double v_inf, double bracket) {
  return -bracket * bracket / (2.0 * m) - v_inf;
}

inline void require_n(int n, const char* op) {
  if (n < 1) throw argument_error(std::string(op) + ": radial quantum number n must be >= 1");
}

} // namespace detail

/// The sqrt(x)-stripped small-x radial profile 2 A cos(2 nu + nu ln(beta x/(4 nu^2)) + pi/4).
inline double smallx_radial(double kappa_r, double nu, double x) {
  if (!(x > 0)) throw argument_error("smallx_radial: x must be > 0");
  return 2.0 * std::exp(specfun::smallx_log_amplitude(kappa_r, nu)) *
         std::cos(specfun::smallx_phase(kappa_r, nu, x));
}

/// Resolves the implicit relation for x0 through 2 tau r0 beta = r0 (tau + delta),
/// giving tau explicitly. x0 may come out nonpositive; callers flag it.
inline QuantizationRoot solve_quantization(const SystemParams& p, int n) {
  const DerivedQuantities d = derived(p);
  require_bound_regime(p, d, "solve_quantization");
  detail::require_n(n, "solve_quantization");
  QuantizationRoot q;
  q.bracket = detail::quantized_product(*d.nu, n) / p.r0 - d.delta;
  q.x0 = 2.0 * q.bracket * p.r0;
  return q;
}

/// Level n of a radial problem (physical or frozen-coefficient).
inline EnergyLevel energy_level(const RadialProblem& rp, int n,
                                double x0_threshold = default_x0_threshold) {
  detail::require_n(n, "energy_level");
  EnergyLevel lv;
  lv.n = n;
  lv.ell = rp.ell;
  lv.bracket = detail::quantized_product(rp.nu, n) / rp.r_wall - rp.delta;
  lv.x0 = 2.0 * lv.bracket * rp.r_wall;
  lv.energy = detail::level_energy(rp.m, rp.v_inf, lv.bracket);
  lv.tau_positive = lv.bracket > 0;
  lv.x0_small = lv.x0 < x0_threshold;
  return lv;
}

inline EnergyLevel energy_level(const SystemParams& p, int n,
                                double x0_threshold = default_x0_threshold) {
  const QuantizationRoot q = solve_quantization(p, n);
  EnergyLevel lv = energy_level(radial_problem(p), n, x0_threshold);
  lv.bracket = q.bracket;
  lv.x0 = q.x0;
  return lv;
}

/// -(delta^2/(2m) + alpha rho0^2 r0^2), the limit of the levels as n grows.
inline double accumulation_energy(const SystemParams& p) {
  const DerivedQuantities d = derived(p);
  return -(d.delta * d.delta / (2.0 * p.m) + d.v_inf);
}

/// E_n - accumulation_energy, formed as P (2 delta - P) / 2m with P = bracket + delta
/// so that high levels keep their relative precision.
inline double accumulation_offset(const SystemParams& p, int n) {
  const DerivedQuantities d = derived(p);
  require_bound_regime(p, d, "accumulation_offset");
  detail::require_n(n, "accumulation_offset");
  const double prod = detail::quantized_product(*d.nu, n) / p.r0;
  return prod * (2.0 * d.delta - prod) / (2.0 * p.m);
}

/// The s-wave energy range. The printed lower end writes the prefactor and
/// exponents with 2 m alpha rho0^2 r0^4 where the level formula has nu, so the
/// two only coincide when that coupling equals 1; both are returned.
inline SwaveBounds swave_bounds(const SystemParams& p) {
  constexpr double pi = std::numbers::pi;
  SystemParams s = p;
  s.ell = 0;
  const DerivedQuantities d = derived(s);
  require_bound_regime(s, d, "swave_bounds");
  const double c = s.coupling(); // 2 m alpha rho0^2 r0^4
  const double printed = 4.0 * c * c * std::exp(pi / (4.0 * c) - 2.0) / s.r0 * std::exp(-pi / c) - d.delta;
  SwaveBounds b;
  b.lower = detail::level_energy(s.m, d.v_inf, printed);
  b.upper = -(d.delta * d.delta / (2.0 * s.m) + d.v_inf);
  b.lower_from_levels = energy_level(s, 1).energy;
  b.ordered = b.lower <= b.upper;
  return b;
}

inline std::vector<EnergyLevel> spectrum(const RadialProblem& rp, int n_max,
                                         double x0_threshold = default_x0_threshold) {
  if (n_max < 1) throw argument_error("spectrum: n_max must be >= 1");
  std::vector<EnergyLevel> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) out.push_back(energy_level(rp, n, x0_threshold));
  return out;
}

inline std::vector<EnergyLevel> spectrum(const SystemParams& p, int n_max,
                                         double x0_threshold = default_x0_threshold) {
  require_bound_regime(p, derived(p), "spectrum");
  if (n_max < 1) throw argument_error("spectrum: n_max must be >= 1");
  std::vector<EnergyLevel> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) out.push_back(energy_level(p, n, x0_threshold));
  return out;
}

/// n = 1 level with the wall moved to each r_wall while nu, delta and the
/// depth stay at their values for the physical r0.
inline std::vector<CutoffPoint> cutoff_scan(const DerivedQuantities& frozen, double m,
                                            std::span<const double> r_walls) {
  if (!frozen.bound_regime || !frozen.nu)
    throw regime_error("cutoff_scan: frozen quantities are outside the bound regime");
  if (r_walls.empty()) throw argument_error("cutoff_scan: empty list of wall radii");
  std::vector<CutoffPoint> out;
  out.reserve(r_walls.size());
  const double prod = detail::quantized_product(*frozen.nu, 1);
  for (double rw : r_walls) {
    if (!(rw > 0)) throw argument_error("cutoff_scan: wall radii must be > 0");
    CutoffPoint pt;
    pt.r_wall = rw;
    pt.bracket = prod / rw - frozen.delta;
    pt.energy = detail::level_energy(m, frozen.v_inf, pt.bracket);
    pt.tau_positive = pt.bracket > 0;
    out.push_back(pt);
  }
  return out;
}

/// The other reading: r0 itself shrinks, so nu, delta and the depth follow it.
/// Points outside the bound regime come back with NaN energy.
inline std::vector<CutoffPoint> cutoff_scan_collapsing(const SystemParams& p,
                                                       std::span<const double> r_walls) {
  if (r_walls.empty()) throw argument_error("cutoff_scan_collapsing: empty list of wall radii");
  std::vector<CutoffPoint> out;
  out.reserve(r_walls.size());
  for (double rw : r_walls) {
    SystemParams q = p;
    q.r0 = rw;
    CutoffPoint pt;
    pt.r_wall = rw;
    if (derived(q).bound_regime) {
      const EnergyLevel lv = energy_level(q, 1);
      pt.energy = lv.energy;
      pt.bracket = lv.bracket;
      pt.tau_positive = lv.tau_positive;
    } else {
      pt.energy = pt.bracket = std::nan("");
    }
    out.push_back(pt);
  }
  return out;
}

} // namespace dipole
