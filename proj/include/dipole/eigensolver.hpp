#pragma once

// Numerical eigenvalue oracles for the hard-wall radial problem.
//
//  * wroot: zeros in E of W_{-kappa(E), i nu}(2 tau(E) r_wall), the decaying
//    Whittaker solution evaluated at the wall.
//  * shooting: inward RK4 integration of the radial equation in s = ln r,
//      d^2 g / ds^2 = (tau^2 r^2 + delta r - nu^2) g,
//    from a decaying seed, with the sign of g(r_wall) as mismatch.
//
// Both scan a geometric grid in tau and bisect sign changes in E.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dipole/analytic_spectrum.hpp"
#include "dipole/errors.hpp"
#include "dipole/model.hpp"
#include "dipole/ode.hpp"
#include "dipole/specfun.hpp"

namespace dipole {

struct EnergyWindow {
  double lo = 0;
  double hi = 0;
};

struct SolverOptions {
  double rmax_mult = 25.0;      // tau (r_max - r_wall) at the top of the window
  int steps = 40000;            // RK4 steps on [r_wall, r_max] in ln r
  int points_per_decade = 400;  // scan density in tau
  double wkb_cap = 40.0;        // start the inward sweep once the WKB exponent reaches this
  double rel_tol = 1e-12;       // bisection tolerance in E
  bool refine_check = true;     // re-solve each shooting level with twice the steps
};

struct RadialSolution {
  std::vector<double> grid;    // r, strictly increasing from r_wall
  std::vector<double> values;  // g(r)
  double energy = 0;
  int node_count = 0;
  double norm = 0;             // int g^2 r dr on the grid
  double log_scale = 0;        // unnormalized g = values * exp(log_scale)
  double boundary_value = 0;   // g(r_wall) as integrated, same scale as values
  double boundary_residual = 0;  // |g(r_wall)| / max |g|
  std::size_t start_index = 0;   // inward sweep started here; WKB tail beyond
  double refinement_delta = std::numeric_limits<double>::quiet_NaN();  // |dE/E| on step doubling
};

/// Sign changes between consecutive nonzero samples.
inline int count_sign_changes(const std::vector<double>& v) {
  int changes = 0;
  int last = 0;
  for (double x : v) {
    const int s = (x > 0) - (x < 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

namespace detail {

inline void check_window(const RadialProblem& rp, const EnergyWindow& w, const char* op) {
  if (!(std::isfinite(w.lo) && std::isfinite(w.hi) && w.lo < w.hi && w.hi < -rp.v_inf)) {
    std::ostringstream os;
    os << op << ": energy window must satisfy lo < hi < -v_inf = " << -rp.v_inf << " (got ["
       << w.lo << ", " << w.hi << "])";
    throw argument_error(os.str());
  }
}

/// Uniform grid in s = ln r with e^s tabulated at nodes and midpoints.
class LogGrid {
public:
  LogGrid(double r_wall, double r_max, int steps)
      : steps_(steps), s0_(std::log(r_wall)), h_((std::log(r_max) - std::log(r_wall)) / steps),
        e_(2 * static_cast<std::size_t>(steps) + 1) {
    for (std::size_t j = 0; j < e_.size(); ++j) e_[j] = std::exp(s0_ + 0.5 * h_ * static_cast<double>(j));
    e_.front() = r_wall;
    e_.back() = r_max;
  }
  int steps() const { return steps_; }
  double h() const { return h_; }
  // e^s at half-step index j (nodes at even j)
  double e(std::size_t j) const { return e_[j]; }
  double r(int i) const { return e_[2 * static_cast<std::size_t>(i)]; }

private:
  int steps_;
  double s0_, h_;
  std::vector<double> e_;
};

struct InwardResult {
  specfun::ScaledReal boundary;  // g(r_wall)
  int start = 0;
};

/// Integrates from the seed inward to r_wall. With `raw`/`scale` non-null
/// every node is stored as raw[i] * exp(scale[i]), including a WKB tail
/// beyond the starting node.
inline InwardResult integrate_inward(const RadialProblem& rp, double tau, const LogGrid& grid,
                                     double wkb_cap, std::vector<double>* raw,
                                     std::vector<double>* scale) {
  const double kappa = rp.kappa(tau);
  const double tau2 = tau * tau, nu2 = rp.nu * rp.nu;
  auto q = [&](std::size_t j) {
    const double e = grid.e(j);
    return tau2 * e * e + rp.delta * e - nu2;
  };
  const int n = grid.steps();
  const double h = grid.h();

  // First node where the accumulated WKB exponent from the wall reaches the cap;
  // anything the seed excites in the other solution is damped by e^{-2 cap}.
  int start = n;
  std::vector<double> wkb;  // running exponent, only needed for the tail
  if (raw) wkb.assign(static_cast<std::size_t>(n) + 1, 0.0);
  {
    double acc = 0, prev = std::sqrt(std::max(q(0), 0.0));
    for (int i = 1; i <= n; ++i) {
      const double cur = std::sqrt(std::max(q(2 * static_cast<std::size_t>(i)), 0.0));
      acc += 0.5 * (prev + cur) * h;
      prev = cur;
      if (raw) wkb[static_cast<std::size_t>(i)] = acc;
      if (acc >= wkb_cap && start == n) {
        start = i;
        if (!raw) break;
      }
    }
  }

  const double x = 2.0 * tau * grid.r(start);
  double log_g = -0.5 * x - (kappa + 0.5) * std::log(x);
  ode::State<double> y{1.0, -0.5 * x - kappa - 0.5};

  if (raw) {
    raw->assign(static_cast<std::size_t>(n) + 1, 0.0);
    scale->assign(static_cast<std::size_t>(n) + 1, 0.0);
    (*raw)[static_cast<std::size_t>(start)] = 1.0;
    (*scale)[static_cast<std::size_t>(start)] = log_g;
    // WKB continuation g ~ Q^{-1/4} exp(-int sqrt(Q) ds) outside the sweep.
    const double qs = q(2 * static_cast<std::size_t>(start));
    for (int i = start + 1; i <= n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      (*raw)[ui] = 1.0;
      (*scale)[ui] = log_g - (wkb[ui] - wkb[static_cast<std::size_t>(start)]) +
                     0.25 * (std::log(qs) - std::log(q(2 * ui)));
    }
  }

  for (int i = start; i > 0; --i) {
    const auto j = 2 * static_cast<std::size_t>(i);
    y = ode::rk4_linear_step(y, -h, q(j), q(j - 1), q(j - 2));
    const double mag = std::abs(y[0]) + std::abs(y[1]);
    if (mag > 1e150 || (mag < 1e-150 && mag > 0)) {
      y[0] /= mag;
      y[1] /= mag;
      log_g += std::log(mag);
    }
    if (raw) {
      (*raw)[static_cast<std::size_t>(i - 1)] = y[0];
      (*scale)[static_cast<std::size_t>(i - 1)] = log_g;
    }
  }
  if (!std::isfinite(y[0])) {
    std::ostringstream os;
    os << "shoot: integration failed at tau = " << tau;
    throw accuracy_error(os.str());
  }
  return {{y[0], log_g}, start};
}

inline double simpson_norm(const LogGrid& grid, const std::vector<double>& values) {
  // int g^2 r dr = int g^2 r^2 ds
  const int n = grid.steps();
  auto f = [&](int i) {
    const double r = grid.r(i);
    const double g = values[static_cast<std::size_t>(i)];
    return g * g * r * r;
  };
  double acc = f(0) + f(n);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i);
  return acc * grid.h() / 3.0;
}

inline RadialSolution assemble(const RadialProblem& rp, double energy, const LogGrid& grid,
                               double wkb_cap) {
  const double tau = rp.tau(energy);
  std::vector<double> raw, scale;
  const InwardResult res = integrate_inward(rp, tau, grid, wkb_cap, &raw, &scale);
  double ref = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (raw[i] != 0) ref = std::max(ref, scale[i] + std::log(std::abs(raw[i])));
  if (!std::isfinite(ref)) throw accuracy_error("shoot: solution vanished identically");

  RadialSolution sol;
  sol.energy = energy;
  sol.log_scale = ref;
  sol.start_index = static_cast<std::size_t>(res.start);
  sol.grid.resize(raw.size());
  sol.values.resize(raw.size());
  double gmax = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    sol.grid[i] = grid.r(static_cast<int>(i));
    sol.values[i] = raw[i] == 0 ? 0.0 : raw[i] * std::exp(scale[i] - ref);
    gmax = std::max(gmax, std::abs(sol.values[i]));
  }
  sol.boundary_value = sol.values.front();
  sol.boundary_residual = std::abs(sol.boundary_value) / gmax;
  sol.node_count = count_sign_changes(sol.values);
  sol.norm = simpson_norm(grid, sol.values);
  return sol;
}

inline int even_steps(int steps) { return steps + (steps % 2); }

inline void check_shoot_args(const RadialProblem& rp, double tau, double r_max, int steps) {
  if (steps < 1000) throw argument_error("shoot: steps must be >= 1000");
  if (!(r_max > rp.r_wall) || !(tau * r_max >= 20.0)) {
    std::ostringstream os;
    os << "shoot: need r_max > r_wall and tau * r_max >= 20 (tau = " << tau << ", r_max = " << r_max
       << ")";
    throw argument_error(os.str());
  }
}

/// Geometric tau grid covering the window, returned as energies in ascending order.
inline std::vector<double> scan_energies(const RadialProblem& rp, const EnergyWindow& w,
                                         int points_per_decade) {
  const double tau_lo = rp.tau(w.hi), tau_hi = rp.tau(w.lo);
  const double decades = std::log10(tau_hi / tau_lo);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
  std::vector<double> energies(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // i = 0 -> tau_hi (lowest energy)
    const double t = tau_hi * std::pow(tau_lo / tau_hi, static_cast<double>(i) / (n - 1));
    energies[static_cast<std::size_t>(i)] = rp.energy_from_tau(t);
  }
  energies.front() = w.lo;
  energies.back() = w.hi;
  return energies;
}

/// Sign-change scan over `energies` followed by bisection in E.
template <class SignFn>
std::vector<double> bracket_and_bisect(const std::vector<double>& energies, SignFn&& sign,
                                       double rel_tol, int max_count) {
  std::vector<double> roots;
  std::vector<int> signs(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) signs[i] = sign(energies[i]);
  for (std::size_t i = 0; i + 1 < energies.size(); ++i) {
    if (static_cast<int>(roots.size()) >= max_count) break;
    if (signs[i] == 0) {
      roots.push_back(energies[i]);
      continue;
    }
    if (signs[i + 1] == 0 || signs[i] == signs[i + 1]) continue;
    double lo = energies[i], hi = energies[i + 1];
    int slo = signs[i];
    for (int it = 0; it < 200 && (hi - lo) > rel_tol * std::abs(0.5 * (lo + hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      const int sm = sign(mid);
      if (sm == 0) {
        lo = hi = mid;
        break;
      }
      if (sm == slo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  if (!signs.empty() && signs.back() == 0 && static_cast<int>(roots.size()) < max_count)
    roots.push_back(energies.back());
  std::sort(roots.begin(), roots.end());
  return roots;
}

} // namespace detail

/// F(E) = W_{-kappa, i nu}(2 tau r_wall), returned scaled.
inline specfun::ScaledReal wall_whittaker(const RadialProblem& rp, double energy) {
  const double tau = rp.tau(energy);
  try {
    return specfun::whittaker_w_imag_scaled({-rp.kappa(tau), rp.nu, 2.0 * tau * rp.r_wall});
  } catch (const error& e) {
    std::ostringstream os;
    os << e.what() << " [at E = " << energy << "]";
    if (e.numerical()) throw accuracy_error(os.str());
    throw argument_error(os.str());
  }
}

inline std::vector<double> wroot_eigenvalues(const RadialProblem& rp, const EnergyWindow& window,
                                             int max_count, const SolverOptions& opt = {}) {
  detail::check_window(rp, window, "wroot_eigenvalues");
  const auto energies = detail::scan_energies(rp, window, opt.points_per_decade);
  return detail::bracket_and_bisect(
      energies, [&](double e) { return wall_whittaker(rp, e).sign(); }, opt.rel_tol, max_count);
}

inline std::vector<double> wroot_eigenvalues(const SystemParams& p, const EnergyWindow& window,
                                             int max_count, const SolverOptions& opt = {}) {
  return wroot_eigenvalues(radial_problem(p), window, max_count, opt);
}

/// Inward integration at one energy on [r_wall, r_max] with `steps` RK4 steps
/// in ln r. The result is unnormalized and keeps the mismatch g(r_wall).
inline RadialSolution shoot(const RadialProblem& rp, double energy, double r_max, int steps,
                            double wkb_cap = SolverOptions{}.wkb_cap) {
  const double tau = rp.tau(energy);
  detail::check_shoot_args(rp, tau, r_max, steps);
  const detail::LogGrid grid(rp.r_wall, r_max, detail::even_steps(steps));
  return detail::assemble(rp, energy, grid, wkb_cap);
}

inline RadialSolution shoot(const SystemParams& p, double energy, double r_max, int steps) {
  return shoot(radial_problem(p), energy, r_max, steps);
}

/// g(r_wall) only, without storing the profile.
inline specfun::ScaledReal shoot_boundary(const RadialProblem& rp, double energy, double r_max,
                                          int steps, double wkb_cap = SolverOptions{}.wkb_cap) {
  const double tau = rp.tau(energy);
  detail::check_shoot_args(rp, tau, r_max, steps);
  const detail::LogGrid grid(rp.r_wall, r_max, detail::even_steps(steps));
  return detail::integrate_inward(rp, tau, grid, wkb_cap, nullptr, nullptr).boundary;
}

inline RadialSolution normalize(RadialSolution sol) {
  if (!(sol.norm > 0) || !std::isfinite(sol.norm))
    throw accuracy_error("normalize: degenerate solution with zero norm");
  if (sol.grid.size() < 3 || sol.grid.size() % 2 == 0)
    throw argument_error("normalize: grid must have an odd number (>= 3) of points");
  const double f = 1.0 / std::sqrt(sol.norm);
  for (double& v : sol.values) v *= f;
  sol.boundary_value *= f;
  sol.log_scale -= std::log(f);
  // Grid is uniform in ln r; recompute on it.
  const double h = std::log(sol.grid.back() / sol.grid.front()) / static_cast<double>(sol.grid.size() - 1);
  double acc = 0;
  const std::size_t n = sol.grid.size() - 1;
  for (std::size_t i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double g = sol.values[i] * sol.grid[i];
    acc += w * g * g;
  }
  sol.norm = acc * h / 3.0;
  return sol;
}

/// Common grid for a window: r_max set by the top of the window.
inline double window_r_max(const RadialProblem& rp, const EnergyWindow& w, double rmax_mult) {
  return rp.r_wall + rmax_mult / rp.tau(w.hi);
}

/// Eigen-solutions by shooting on one grid shared by the whole window, so
/// the returned profiles can be compared point by point.
inline std::vector<RadialSolution> shooting_eigenvalues(const RadialProblem& rp,
                                                        const EnergyWindow& window, int max_count,
                                                        const SolverOptions& opt = {}) {
  detail::check_window(rp, window, "shooting_eigenvalues");
  if (opt.steps < 1000) throw argument_error("shooting_eigenvalues: steps must be >= 1000");
  const double r_max = window_r_max(rp, window, opt.rmax_mult);
  const detail::LogGrid grid(rp.r_wall, r_max, detail::even_steps(opt.steps));
  auto sign_on = [&](const detail::LogGrid& g) {
    return [&rp, &g, &opt](double e) {
      return detail::integrate_inward(rp, rp.tau(e), g, opt.wkb_cap, nullptr, nullptr).boundary.sign();
    };
  };
  const auto energies = detail::scan_energies(rp, window, opt.points_per_decade);
  const auto roots = detail::bracket_and_bisect(energies, sign_on(grid), opt.rel_tol, max_count);

  std::optional<detail::LogGrid> fine;
  if (opt.refine_check && !roots.empty())
    fine.emplace(rp.r_wall, r_max, 2 * detail::even_steps(opt.steps));

  std::vector<RadialSolution> out;
  out.reserve(roots.size());
  for (double e : roots) {
    RadialSolution sol = detail::assemble(rp, e, grid, opt.wkb_cap);
    if (fine) {
      // Re-bracket the root on the doubled grid.
      const auto fsign = sign_on(*fine);
      double span = 1e-9 * std::abs(e);
      for (int k = 0; k < 12; ++k, span *= 4) {
        const double lo = e - span, hi = std::min(e + span, window.hi);
        if (lo < window.lo) break;
        const int slo = fsign(lo), shi = fsign(hi);
        if (slo != shi) {
          const auto r2 = detail::bracket_and_bisect(std::vector<double>{lo, hi}, fsign, opt.rel_tol, 1);
          if (!r2.empty()) sol.refinement_delta = std::abs(r2.front() - e) / std::abs(e);
          break;
        }
      }
    }
    // Impose the wall condition; the residual stays on record.
    sol.values.front() = 0.0;
    sol.node_count = count_sign_changes(sol.values);
    sol.norm = detail::simpson_norm(grid, sol.values);
    out.push_back(normalize(std::move(sol)));
  }
  return out;
}

inline std::vector<RadialSolution> shooting_eigenvalues(const SystemParams& p,
                                                        const EnergyWindow& window, int max_count,
                                                        const SolverOptions& opt = {}) {
  return shooting_eigenvalues(radial_problem(p), window, max_count, opt);
}

/// Inner product int g_a g_b r dr of two solutions on the same grid.
inline double overlap(const RadialSolution& a, const RadialSolution& b) {
  if (a.grid.size() != b.grid.size() || a.grid.size() % 2 == 0 || a.grid.front() != b.grid.front() ||
      a.grid.back() != b.grid.back())
    throw argument_error("overlap: solutions live on different grids");
  const std::size_t n = a.grid.size() - 1;
  const double h = std::log(a.grid.back() / a.grid.front()) / static_cast<double>(n);
  double acc = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * a.values[i] * b.values[i] * a.grid[i] * a.grid[i];
  }
  return acc * h / 3.0;
}

// ---------------------------------------------------------------------------
// Integrator self-check

struct SelfcheckRow {
  std::string function;  // "W" or "M"
  double kappa = 0;
  double nu = 0;
  double max_rel_dev = 0;
  double threshold = 1e-7;
  bool pass = false;
};

struct SelfcheckReport {
  std::vector<SelfcheckRow> rows;
  bool pass = true;
};

namespace detail {

// max |a - b| / local envelope of |b|, envelope taken over x' in [x/1.5, 1.5 x]
inline double max_enveloped_deviation(const std::vector<double>& xs, const std::vector<double>& got,
                                      const std::vector<double>& ref) {
  double worst = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double env = 0;
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (xs[j] >= xs[i] / 1.5 && xs[j] <= xs[i] * 1.5) env = std::max(env, std::abs(ref[j]));
    if (env > 0) worst = std::max(worst, std::abs(got[i] - ref[i]) / env);
  }
  return worst;
}

} // namespace detail

/// Integrates Whittaker's equation with the same RK4 stepper used for
/// shooting, from series data at x = 0.5 to x = 10, and measures the largest
/// deviation from whittaker_w_imag and whittaker_m_imag.
inline SelfcheckReport integrator_selfcheck() {
  constexpr double x0 = 0.5, x1 = 10.0, threshold = 1e-7;
  constexpr int steps = 20000, every = 100;
  const std::vector<std::pair<double, double>> cases = {
      {0.0, 1.0}, {-1.0, std::numbers::sqrt2}, {-2.0, 0.5}, {0.3, 2.0}};
  SelfcheckReport rep;
  for (auto [k, nu] : cases) {
    const double c = 0.25 + nu * nu;
    auto q = [k, c](double x) { return 0.25 - k / x - c / (x * x); };

    {
      const auto wd = specfun::whittaker_w_imag_with_derivative({k, nu, x0});
      std::vector<double> xs, got, ref;
      int i = 0;
      ode::integrate_linear(q, x0, x1, ode::State<double>{wd[0], wd[1]}, steps,
                            [&](double x, const ode::State<double>& y) {
                              if (i++ % every) return;
                              xs.push_back(x);
                              got.push_back(y[0]);
                              ref.push_back(specfun::whittaker_w_imag({k, nu, x}));
                            });
      SelfcheckRow row{"W", k, nu, detail::max_enveloped_deviation(xs, got, ref), threshold, false};
      row.pass = row.max_rel_dev <= threshold;
      rep.pass = rep.pass && row.pass;
      rep.rows.push_back(row);
    }
    {
      const auto md = specfun::whittaker_m_imag_with_derivative({k, nu, x0});
      std::vector<double> xs, got, ref;
      int i = 0;
      ode::integrate_linear(q, x0, x1, ode::State<specfun::cplx>{md[0], md[1]}, steps,
                            [&](double x, const ode::State<specfun::cplx>& y) {
                              if (i++ % every) return;
                              xs.push_back(x);
                              const auto m = specfun::whittaker_m_imag({k, nu, x});
                              got.push_back(std::abs(y[0] - m));
                              ref.push_back(std::abs(m));
                            });
      // got holds |y - M|; |M| has no zeros on the positive axis
      SelfcheckRow row{"M", k, nu, 0.0, threshold, false};
      for (std::size_t j = 0; j < xs.size(); ++j) row.max_rel_dev = std::max(row.max_rel_dev, got[j] / ref[j]);
      row.pass = row.max_rel_dev <= threshold;
      rep.pass = rep.pass && row.pass;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Comparison harness

inline constexpr double match_threshold = 1e-4;

struct ComparisonRow {
  std::optional<int> n;
  int ell = 0;
  std::optional<double> e_analytic, e_wroot, e_shoot;
  std::optional<double> rel_dev_ws, rel_dev_aw;
  std::optional<int> nodes;
  std::string flags;
};

struct ComparisonSummary {
  EnergyWindow window;
  bool frozen = false;
  double r_wall = 0;
  double v_inf = 0;
  double accumulation_energy = 0;
  int analytic_levels = 0;
  int analytic_tau_positive = 0;
  int formula_invalid = 0;
  int wroot_found = 0;
  int shoot_found = 0;
  int paired = 0;
  int unpaired = 0;
  double max_rel_dev_ws = 0;
  bool bound_state_found = false;
  bool accumulation_approached = false;
  std::vector<std::string> notes;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  ComparisonSummary summary;
};

/// Default scan window: the span between the n = 1 level and the
/// accumulation energy, doubled about its centre and clipped below -v_inf.
inline EnergyWindow default_window(const RadialProblem& rp) {
  const double e1 = energy_level(rp, 1).energy;
  const double eacc = -(rp.delta * rp.delta / (2.0 * rp.m) + rp.v_inf);
  const double a = std::min(e1, eacc), b = std::max(e1, eacc);
  const double half = std::max(b - a, 1e-3 * std::abs(eacc));
  const double mid = 0.5 * (a + b);
  EnergyWindow w{mid - half, mid + half};
  const double ceiling = -rp.v_inf * (1.0 + 1e-6);
  if (w.hi > ceiling) w.hi = ceiling;
  if (w.lo >= w.hi) w.lo = w.hi - half;
  return w;
}

namespace detail {

inline double rel_dev(double a, double b) { return std::abs(a - b) / std::abs(b); }

inline std::string fmt6(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

} // namespace detail

inline ComparisonReport compare(const RadialProblem& rp, int n_max, const EnergyWindow& window,
                                const SolverOptions& opt = {}) {
  if (n_max < 1) throw argument_error("compare: n_max must be >= 1");
  detail::check_window(rp, window, "compare");
  constexpr int max_levels = 1000;

  const auto analytic = spectrum(rp, n_max);
  const auto wroots = wroot_eigenvalues(rp, window, max_levels, opt);
  const auto shots = shooting_eigenvalues(rp, window, max_levels, opt);

  ComparisonReport rep;
  auto& s = rep.summary;
  s.window = window;
  s.frozen = rp.frozen;
  s.r_wall = rp.r_wall;
  s.v_inf = rp.v_inf;
  s.accumulation_energy = -(rp.delta * rp.delta / (2.0 * rp.m) + rp.v_inf);
  s.analytic_levels = static_cast<int>(analytic.size());
  s.wroot_found = static_cast<int>(wroots.size());
  s.shoot_found = static_cast<int>(shots.size());

  // Pair the two numerical oracles by energy proximity.
  struct Numeric {
    std::optional<double> wroot, shoot;
    std::optional<int> nodes;
    bool used = false;
  };
  std::vector<Numeric> numeric;
  std::vector<bool> wused(wroots.size(), false);
  for (const auto& sol : shots) {
    Numeric nm;
    nm.shoot = sol.energy;
    nm.nodes = sol.node_count;
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < wroots.size(); ++j) {
      if (wused[j]) continue;
      const double d = detail::rel_dev(wroots[j], sol.energy);
      if (d <= match_threshold && (!best || d < detail::rel_dev(wroots[*best], sol.energy))) best = j;
    }
    if (best) {
      wused[*best] = true;
      nm.wroot = wroots[*best];
    }
    numeric.push_back(nm);
  }
  for (std::size_t j = 0; j < wroots.size(); ++j)
    if (!wused[j]) numeric.push_back(Numeric{wroots[j], std::nullopt, std::nullopt, false});
  std::sort(numeric.begin(), numeric.end(), [](const Numeric& a, const Numeric& b) {
    return a.shoot.value_or(*a.wroot) < b.shoot.value_or(*b.wroot);
  });

  for (const auto& nm : numeric) {
    if (nm.wroot && nm.shoot) {
      ++s.paired;
      s.max_rel_dev_ws = std::max(s.max_rel_dev_ws, detail::rel_dev(*nm.wroot, *nm.shoot));
    } else {
      ++s.unpaired;
    }
  }

  // Analytic rows; a tau-positive level n is matched to the shooting level
  // with n - 1 nodes.
  for (const auto& lv : analytic) {
    ComparisonRow row;
    row.n = lv.n;
    row.ell = lv.ell;
    row.e_analytic = lv.energy;
    std::string flags = lv.tau_positive ? "tau-positive" : "formula-invalid";
    if (lv.tau_positive && lv.x0_small) flags += ";x0-small";
    if (lv.tau_positive) {
      ++s.analytic_tau_positive;
      auto it = std::find_if(numeric.begin(), numeric.end(), [&](const Numeric& nm) {
        return !nm.used && nm.nodes && *nm.nodes == lv.n - 1;
      });
      if (it != numeric.end()) {
        it->used = true;
        row.e_wroot = it->wroot;
        row.e_shoot = it->shoot;
        row.nodes = it->nodes;
        const double num = it->wroot.value_or(*it->shoot);
        row.rel_dev_aw = detail::rel_dev(lv.energy, num);
        flags += *row.rel_dev_aw <= match_threshold ? ";matched" : ";matched-by-nodes";
      } else {
        flags += ";no-numerical-level";
      }
    } else {
      ++s.formula_invalid;
    }
    if (row.e_wroot && row.e_shoot) row.rel_dev_ws = detail::rel_dev(*row.e_wroot, *row.e_shoot);
    row.flags = flags;
    rep.rows.push_back(row);
  }
  for (const auto& nm : numeric) {
    if (nm.used) continue;
    ComparisonRow row;
    row.ell = rp.ell;
    row.e_wroot = nm.wroot;
    row.e_shoot = nm.shoot;
    row.nodes = nm.nodes;
    if (nm.nodes) row.n = *nm.nodes + 1;
    if (nm.wroot && nm.shoot) row.rel_dev_ws = detail::rel_dev(*nm.wroot, *nm.shoot);
    row.flags = "numerical-only";
    if (!(nm.wroot && nm.shoot)) row.flags += nm.wroot ? ";wroot-only" : ";shoot-only";
    rep.rows.push_back(row);
  }

  // Adjudication.
  std::vector<double> levels;
  for (const auto& nm : numeric) levels.push_back(nm.shoot.value_or(*nm.wroot));
  s.bound_state_found = !levels.empty();
  {
    std::vector<double> below;
    for (double e : levels)
      if (e < s.accumulation_energy) below.push_back(e);
    bool shrinking = below.size() >= 3 && below.size() == levels.size();
    for (std::size_t i = 1; shrinking && i < below.size(); ++i) {
      const double prev = s.accumulation_energy - below[i - 1];
      const double cur = s.accumulation_energy - below[i];
      shrinking = cur < prev;
    }
    s.accumulation_approached = shrinking;
  }

  std::ostringstream head;
  head << (rp.frozen ? "frozen-coefficient reading, wall at r_wall = " + detail::fmt6(rp.r_wall)
                     : std::string("physical reading, wall at r0"))
       << "; window [" << detail::fmt6(window.lo) << ", " << detail::fmt6(window.hi) << "]";
  s.notes.push_back(head.str());
  if (levels.empty()) {
    s.notes.push_back("no bound states found in window");
  } else {
    std::ostringstream os;
    os << levels.size() << " numerical bound state(s) with E < -alpha rho0^2 r0^2 = "
       << detail::fmt6(-rp.v_inf) << " found in window (wroot " << s.wroot_found << ", shooting "
       << s.shoot_found << ", paired " << s.paired << ")";
    s.notes.push_back(os.str());
  }
  {
    std::ostringstream os;
    os << "analytic levels n = 1.." << n_max << ": " << s.analytic_tau_positive << " with tau > 0, "
       << s.formula_invalid << " formula-invalid (bracket <= 0)";
    s.notes.push_back(os.str());
  }
  if (!rp.frozen) {
    s.notes.push_back(
        "V(r) + alpha rho0^2 r0^2 = alpha rho0^2 r0^3 (2r - r0)/r^2 > 0 for r > r0 and the kinetic "
        "and centrifugal terms are nonnegative, so no normalizable state lies below "
        "-alpha rho0^2 r0^2");
  }
  {
    std::ostringstream os;
    os << "accumulation energy " << detail::fmt6(s.accumulation_energy) << " "
       << (s.accumulation_approached ? "is approached by the numerical levels"
                                     : "is not approached by the numerical levels");
    s.notes.push_back(os.str());
  }
  s.notes.push_back(levels.empty()
                        ? "claim of infinitely many bound states in the stated range: not reproduced"
                        : (s.accumulation_approached
                               ? "claim of infinitely many bound states in the stated range: consistent"
                               : "claim of infinitely many bound states in the stated range: not reproduced "
                                 "(finitely many levels, no accumulation)"));
  return rep;
}

inline ComparisonReport compare(const SystemParams& p, int n_max, const EnergyWindow& window,
                                const SolverOptions& opt = {}) {
  return compare(radial_problem(p), n_max, window, opt);
}

} // namespace dipole
