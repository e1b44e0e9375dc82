#pragma once

// Physical model: a neutral polarizable particle outside a long charged
// non-conductive cylinder of inner radius r0 with charge density
// rho0 * r0 / r. Natural units (hbar = c = 1), p_z = 0.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "dipole/errors.hpp"

namespace dipole {

struct SystemParams {
  double m = 1.0;     // particle mass
  double alpha = 1.0; // atomic polarizability
  double rho0 = 1.0;  // charge density scale
  double r0 = 1.0;    // inner cylinder radius (hard wall)
  int ell = 0;        // angular momentum quantum number

  /// Coupling 2 m alpha rho0^2 r0^4 that competes with ell^2.
  double coupling() const { return 2.0 * m * alpha * rho0 * rho0 * r0 * r0 * r0 * r0; }

  void validate() const {
    auto bad = [](const char* what, double v) {
      std::ostringstream os;
      os << "invalid SystemParams: " << what << " (got " << v << ")";
      throw argument_error(os.str());
    };
    if (!(std::isfinite(m) && m > 0)) bad("m must be finite and > 0", m);
    if (!(std::isfinite(alpha) && alpha > 0)) bad("alpha must be finite and > 0", alpha);
    if (!(std::isfinite(rho0) && rho0 != 0)) bad("rho0 must be finite and nonzero", rho0);
    if (!(std::isfinite(r0) && r0 > 0)) bad("r0 must be finite and > 0", r0);
  }
};

/// Scalar parameters of the radial equation
///   g'' + g'/r + nu^2/r^2 g - delta/r g - tau^2 g = 0.
struct DerivedQuantities {
  double nu2 = 0;             // 2 m alpha rho0^2 r0^4 - ell^2
  std::optional<double> nu;   // sqrt(nu2), only in the bound regime
  double delta = 0;           // 4 m alpha rho0^2 r0^3
  double v_inf = 0;           // alpha rho0^2 r0^2, depth of V at infinity
  bool bound_regime = false;  // nu2 > 0
};

struct EnergyTau {
  double energy = 0;
  double tau = 0;   // sqrt(-2 m E - 2 m v_inf)
  double kappa = 0; // delta / (2 tau)
  double x0 = 0;    // 2 tau r0
};

namespace detail {

inline void check_outside(const SystemParams& p, double r, const char* op) {
  if (!(r >= p.r0)) {
    std::ostringstream os;
    os << op << ": r = " << r << " lies in the forbidden region r < r0 = " << p.r0;
    throw domain_error(os.str());
  }
}

} // namespace detail

/// Radial field rho0 r0 - rho0 r0^2 / r for r >= r0.
inline double electric_field(const SystemParams& p, double r) {
  detail::check_outside(p, r, "electric_field");
  if (std::isinf(r)) return p.rho0 * p.r0;
  return p.rho0 * p.r0 - p.rho0 * p.r0 * p.r0 / r;
}

/// V(r) = -alpha rho0^2 r0^4/r^2 + 2 alpha rho0^2 r0^3/r - alpha rho0^2 r0^2,
/// evaluated as -alpha rho0^2 r0^2 (1 - r0/r)^2 so that V(r0) is exactly 0.
inline double potential_energy(const SystemParams& p, double r) {
  detail::check_outside(p, r, "potential_energy");
  const double a = p.alpha * p.rho0 * p.rho0;
  const double r02 = p.r0 * p.r0;
  if (std::isinf(r)) return -a * r02;
  const double u = 1.0 - p.r0 / r;
  return -a * r02 * u * u;
}

inline DerivedQuantities derived(const SystemParams& p) {
  p.validate();
  DerivedQuantities d;
  const double a = p.alpha * p.rho0 * p.rho0;
  const double r03 = p.r0 * p.r0 * p.r0;
  d.nu2 = p.coupling() - static_cast<double>(p.ell) * p.ell;
  d.delta = 4.0 * p.m * a * r03;
  d.v_inf = a * p.r0 * p.r0;
  d.bound_regime = d.nu2 > 0;
  if (d.bound_regime) d.nu = std::sqrt(d.nu2);
  return d;
}

/// tau, kappa and x0 at a trial energy. Requires E < -v_inf (the stated
/// bound-state assumption E < 0 is not enough for tau to be real).
inline EnergyTau energy_tau(const SystemParams& p, double energy) {
  const DerivedQuantities d = derived(p);
  const double tau2 = -2.0 * p.m * energy - 2.0 * p.m * d.v_inf;
  if (!(tau2 > 0)) {
    std::ostringstream os;
    os << "energy_tau: E = " << energy << " is not below -alpha rho0^2 r0^2 = " << -d.v_inf
       << "; tau would be imaginary (scattering energy)";
    throw imaginary_tau_error(os.str());
  }
  EnergyTau t;
  t.energy = energy;
  t.tau = std::sqrt(tau2);
  t.kappa = d.delta / (2.0 * t.tau);
  t.x0 = 2.0 * t.tau * p.r0;
  return t;
}

inline void require_bound_regime(const SystemParams& p, const DerivedQuantities& d,
                                 const char* op) {
  if (!d.bound_regime) {
    std::ostringstream os;
    os << op << ": ell^2 = " << p.ell * p.ell << " >= 2 m alpha rho0^2 r0^4 = " << p.coupling()
       << "; the radial solution is not a Whittaker function of imaginary order";
    throw regime_error(os.str());
  }
}

/// Coefficients of the radial equation together with the radius of the hard
/// wall. For the physical problem the wall sits at r0; the cutoff reading keeps
/// nu, delta and v_inf at their r0 values and moves the wall to r_wall.
struct RadialProblem {
  double m = 1;
  int ell = 0;
  double nu = 0;
  double delta = 0;
  double v_inf = 0;
  double r_wall = 1;
  bool frozen = false; // r_wall differs from the r0 that fixed the coefficients

  double tau(double energy) const {
    const double tau2 = -2.0 * m * energy - 2.0 * m * v_inf;
    if (!(tau2 > 0)) {
      std::ostringstream os;
      os << "E = " << energy << " is not below -v_inf = " << -v_inf << "; tau would be imaginary";
      throw imaginary_tau_error(os.str());
    }
    return std::sqrt(tau2);
  }
  double energy_from_tau(double tau) const { return -tau * tau / (2.0 * m) - v_inf; }
  double kappa(double tau) const { return delta / (2.0 * tau); }
};

inline RadialProblem make_problem(const SystemParams& p, const DerivedQuantities& d, double r_wall,
                                  const char* op) {
  require_bound_regime(p, d, op);
  if (!(std::isfinite(r_wall) && r_wall > 0)) {
    std::ostringstream os;
    os << op << ": wall radius must be finite and > 0 (got " << r_wall << ")";
    throw argument_error(os.str());
  }
  RadialProblem rp;
  rp.m = p.m;
  rp.ell = p.ell;
  rp.nu = *d.nu;
  rp.delta = d.delta;
  rp.v_inf = d.v_inf;
  rp.r_wall = r_wall;
  rp.frozen = r_wall != p.r0;
  return rp;
}

/// The physical problem: wall at r0.
inline RadialProblem radial_problem(const SystemParams& p) {
  return make_problem(p, derived(p), p.r0, "radial_problem");
}

/// Cutoff reading: coefficients from p, wall at r_wall.
inline RadialProblem frozen_problem(const SystemParams& p, double r_wall) {
  return make_problem(p, derived(p), r_wall, "frozen_problem");
}

} // namespace dipole
