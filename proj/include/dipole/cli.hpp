#pragma once

// Command dispatch for the `dipole` executable. Kept in a header so the tests
// drive exactly what the binary runs.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dipole/analytic_spectrum.hpp"
#include "dipole/eigensolver.hpp"
#include "dipole/errors.hpp"
#include "dipole/io/config.hpp"
#include "dipole/io/table.hpp"
#include "dipole/model.hpp"
#include "dipole/specfun.hpp"

namespace dipole::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 1;
inline constexpr int exit_numerical = 2;

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"potential", "field",        "spectrum",    "solve",
                                             "compare",   "wavefunction", "cutoff-scan", "selfcheck"};
  return c;
}

// ---------------------------------------------------------------------------
// Special-function identities run by `selfcheck`.

namespace detail {

// K_{i nu}(z) = int_0^inf e^{-z cosh t} cos(nu t) dt by the trapezoid rule;
// the integrand is entire and decays double-exponentially.
inline double bessel_k_imag_trapezoid(double nu, double z) {
  const double h = 1.0 / 64.0;
  double acc = 0.5 * std::exp(-z);
  for (int i = 1;; ++i) {
    const double t = i * h;
    const double e = z * std::cosh(t);
    if (e > 745.0) break;
    acc += std::exp(-e) * std::cos(nu * t);
  }
  return acc * h;
}

inline SelfcheckRow identity_row(std::string name, double kappa, double nu, double dev, double threshold) {
  return {std::move(name), kappa, nu, dev, threshold, dev <= threshold};
}

} // namespace detail

inline SelfcheckReport specfun_identities() {
  using specfun::cplx;
  SelfcheckReport rep;
  auto add = [&rep](SelfcheckRow r) {
    rep.pass = rep.pass && r.pass;
    rep.rows.push_back(std::move(r));
  };

  // W_{0, i nu}(2z) = sqrt(2z/pi) K_{i nu}(z)
  for (double nu : {0.5, 1.0, 2.0}) {
    double worst = 0;
    for (double z : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const double w = specfun::whittaker_w_imag({0.0, nu, 2.0 * z});
      const double k = std::sqrt(2.0 * z / std::numbers::pi) * detail::bessel_k_imag_trapezoid(nu, z);
      worst = std::max(worst, std::abs(w - k) / std::abs(k));
    }
    add(detail::identity_row("W-bessel-k", 0.0, nu, worst, 1e-8));
  }

  // Gamma recurrence and reflection
  {
    double rec = 0, refl = 0;
    for (cplx z : {cplx{0.3, 0.7}, cplx{2.5, -1.2}, cplx{-1.7, 0.4}, cplx{0.5, 3.0}, cplx{7.1, 0.0}}) {
      const cplx g = specfun::gamma_complex(z);
      rec = std::max(rec, std::abs(specfun::gamma_complex(z + 1.0) - z * g) / std::abs(z * g));
      const cplx lhs = g * specfun::gamma_complex(1.0 - z);
      const cplx rhs = std::numbers::pi / std::sin(std::numbers::pi * z);
      refl = std::max(refl, std::abs(lhs - rhs) / std::abs(rhs));
    }
    add(detail::identity_row("gamma-recurrence", 0, 0, rec, 1e-11));
    add(detail::identity_row("gamma-reflection", 0, 0, refl, 1e-11));
  }

  // Two independent routes to W agree where both apply.
  for (auto [k, nu, x] : {std::array<double, 3>{-1.0, 1.0, 2.0}, {0.25, 0.7, 1.0}, {-3.0, 2.0, 5.0}}) {
    const auto a = specfun::detail::w_from_m_combination(k, nu, x);
    const auto b = specfun::detail::w_from_laplace_integral(k, nu, x);
    const double dev = std::abs(a.value() - b.value()) / std::abs(b.value());
    add(detail::identity_row("W-combination-vs-integral", k, nu, dev, 1e-10));
  }
  return rep;
}

// ---------------------------------------------------------------------------

inline RadialProblem problem_of(const io::RunConfig& cfg) {
  return cfg.r_wall ? frozen_problem(cfg.params, *cfg.r_wall) : radial_problem(cfg.params);
}

inline EnergyWindow window_of(const io::RunConfig& cfg, const RadialProblem& rp) {
  return cfg.window ? *cfg.window : default_window(rp);
}

namespace detail {

inline io::Table profile_table(const RadialSolution& sol, int points) {
  io::Table t{"profile", {"r", "value"}, {}};
  const std::size_t n = sol.grid.size();
  const std::size_t stride = std::max<std::size_t>(1, (n - 1) / static_cast<std::size_t>(std::max(points - 1, 1)));
  for (std::size_t i = 0; i < n; i += stride) t.rows.push_back({io::format_real(sol.grid[i]), io::format_real(sol.values[i])});
  if ((n - 1) % stride) t.rows.push_back({io::format_real(sol.grid.back()), io::format_real(sol.values.back())});
  return t;
}

inline std::string profile_path(const std::string& out, int level, io::Format f) {
  const std::string ext = f == io::Format::tsv ? ".tsv" : ".csv";
  std::string stem = out;
  if (stem.size() > 4 && (stem.ends_with(".csv") || stem.ends_with(".tsv"))) stem.resize(stem.size() - 4);
  return stem + ".level" + std::to_string(level) + ext;
}

inline void write_file(const std::string& path, const io::Table& t, io::Format f) {
  std::ofstream os(path);
  if (!os) throw config_error("cannot open output file '" + path + "'");
  io::write_table(os, t, f);
  if (!os) throw config_error("failed writing '" + path + "'");
}

inline io::Table sampled(const io::RunConfig& cfg, const char* schema, double (*fn)(const SystemParams&, double)) {
  const auto& p = cfg.params;
  io::Table t{schema, {"r", "value"}, {}};
  const double r1 = cfg.r_end_mult * p.r0;
  for (int i = 0; i < cfg.points; ++i) {
    const double r = i == 0 ? p.r0 : p.r0 + (r1 - p.r0) * i / (cfg.points - 1);
    t.rows.push_back({io::format_real(r), io::format_real(fn(p, r))});
  }
  return t;
}

inline void print_selfcheck(std::ostream& os, const SelfcheckReport& rep) {
  for (const auto& r : rep.rows)
    os << (r.pass ? "ok   " : "FAIL ") << r.function << " kappa=" << io::format_short(r.kappa)
       << " nu=" << io::format_short(r.nu) << " max_rel_dev=" << io::format_short(r.max_rel_dev)
       << " threshold=" << io::format_short(r.threshold) << '\n';
}

} // namespace detail

/// Executes one command. Tables go to cfg.out (or `out` when empty); the
/// human-readable report goes to `out` when a file was written, else to `err`.
inline int run(std::string_view command, const io::RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ostream& report = cfg.out.empty() ? err : out;
  auto emit = [&](const io::Table& t) {
    if (cfg.out.empty()) {
      io::write_table(out, t, cfg.format);
    } else {
      detail::write_file(cfg.out, t, cfg.format);
      report << "wrote " << cfg.out << '\n';
    }
  };
  try {
    const SystemParams& p = cfg.params;
    if (command == "potential") {
      emit(detail::sampled(cfg, "potential", &potential_energy));
    } else if (command == "field") {
      emit(detail::sampled(cfg, "field", &electric_field));
    } else if (command == "spectrum") {
      const auto levels = cfg.r_wall ? spectrum(problem_of(cfg), cfg.n_max, cfg.x0_threshold)
                                     : spectrum(p, cfg.n_max, cfg.x0_threshold);
      io::Table t{"spectrum", {"n", "ell", "energy", "bracket", "x0", "tau_positive", "x0_small"}, {}};
      int positive = 0;
      for (const auto& lv : levels) {
        positive += lv.tau_positive;
        t.rows.push_back({std::to_string(lv.n), std::to_string(lv.ell), io::format_real(lv.energy),
                          io::format_real(lv.bracket), io::format_real(lv.x0),
                          io::format_bool(lv.tau_positive), io::format_bool(lv.x0_small)});
      }
      emit(t);
      const auto rp = problem_of(cfg);
      report << "levels n = 1.." << cfg.n_max << ": " << positive << " with tau > 0, "
             << cfg.n_max - positive << " formula-invalid\n"
             << "accumulation energy " << io::format_short(-(rp.delta * rp.delta / (2 * rp.m) + rp.v_inf))
             << '\n';
    } else if (command == "solve") {
      const auto rp = problem_of(cfg);
      const auto w = window_of(cfg, rp);
      const auto opt = cfg.solver();
      const auto sols = shooting_eigenvalues(rp, w, cfg.n_max, opt);
      const auto wroots = wroot_eigenvalues(rp, w, cfg.n_max, opt);
      io::Table t{"solve",
                  {"n", "ell", "energy", "nodes", "boundary_residual", "refinement_delta", "E_wroot", "rel_dev_ws"},
                  {}};
      for (std::size_t i = 0; i < sols.size(); ++i) {
        const auto& s = sols[i];
        std::optional<double> ew, dev;
        for (double e : wroots)
          if (std::abs(e - s.energy) <= match_threshold * std::abs(s.energy)) ew = e;
        if (ew) dev = std::abs(*ew - s.energy) / std::abs(s.energy);
        t.rows.push_back({std::to_string(s.node_count + 1), std::to_string(rp.ell), io::format_real(s.energy),
                          std::to_string(s.node_count), io::format_real(s.boundary_residual),
                          io::format_real(s.refinement_delta), io::format_real(ew), io::format_real(dev)});
      }
      emit(t);
      if (!cfg.out.empty()) {
        for (const auto& s : sols) {
          const auto path = detail::profile_path(cfg.out, s.node_count + 1, cfg.format);
          detail::write_file(path, detail::profile_table(s, cfg.points), cfg.format);
          report << "wrote " << path << '\n';
        }
      }
      report << "window [" << io::format_short(w.lo) << ", " << io::format_short(w.hi) << "]: "
             << sols.size() << " shooting level(s), " << wroots.size() << " wroot level(s)\n";
      if (sols.empty() && wroots.empty()) report << "no bound states found in window\n";
    } else if (command == "compare") {
      const auto rp = problem_of(cfg);
      const auto w = window_of(cfg, rp);
      const auto rep = compare(rp, cfg.n_max, w, cfg.solver());
      io::Table t{"compare",
                  {"n", "ell", "E_analytic", "E_wroot", "E_shoot", "rel_dev_ws", "rel_dev_aw", "flags"},
                  {}};
      for (const auto& r : rep.rows)
        t.rows.push_back({io::format_int(r.n), std::to_string(r.ell), io::format_real(r.e_analytic),
                          io::format_real(r.e_wroot), io::format_real(r.e_shoot), io::format_real(r.rel_dev_ws),
                          io::format_real(r.rel_dev_aw), r.flags});
      emit(t);
      for (const auto& note : rep.summary.notes) report << note << '\n';
    } else if (command == "wavefunction") {
      const auto rp = problem_of(cfg);
      const auto opt = cfg.solver();
      RadialSolution sol;
      if (cfg.energy) {
        const double r_max = rp.r_wall + cfg.rmax_mult / rp.tau(*cfg.energy);
        sol = normalize(shoot(rp, *cfg.energy, r_max, cfg.steps, opt.wkb_cap));
        report << "profile at E = " << io::format_short(*cfg.energy) << " (not an eigenvalue unless chosen so), "
               << "g(r_wall)/max|g| = " << io::format_short(sol.boundary_residual) << '\n';
      } else {
        const auto w = window_of(cfg, rp);
        const auto sols = shooting_eigenvalues(rp, w, cfg.level, opt);
        if (static_cast<int>(sols.size()) < cfg.level) {
          err << "wavefunction: level " << cfg.level << " not found in window [" << io::format_short(w.lo)
              << ", " << io::format_short(w.hi) << "] (" << sols.size() << " level(s) found)\n";
          return exit_config;
        }
        sol = sols[static_cast<std::size_t>(cfg.level - 1)];
        report << "level " << cfg.level << ": E = " << io::format_short(sol.energy) << ", nodes "
               << sol.node_count << '\n';
      }
      emit(detail::profile_table(sol, cfg.points));
    } else if (command == "cutoff-scan") {
      std::vector<double> walls;
      for (int k = 0; k <= cfg.cutoff_kmax; ++k) walls.push_back(std::ldexp(p.r0, -k));
      const auto frozen = cutoff_scan(derived(p), p.m, walls);
      const auto collapsing = cutoff_scan_collapsing(p, walls);
      io::Table t{"cutoff-scan", {"r_wall", "E1_frozen", "bracket", "tau_positive", "E1_collapsing"}, {}};
      bool decreasing = true;
      for (std::size_t i = 0; i < frozen.size(); ++i) {
        if (i && !(frozen[i].energy < frozen[i - 1].energy)) decreasing = false;
        t.rows.push_back({io::format_real(frozen[i].r_wall), io::format_real(frozen[i].energy),
                          io::format_real(frozen[i].bracket), io::format_bool(frozen[i].tau_positive),
                          io::format_real(collapsing[i].energy)});
      }
      emit(t);
      const double eacc = accumulation_energy(p);
      report << "frozen E1 " << (decreasing ? "strictly decreasing" : "not monotone") << " over k = 0.."
             << cfg.cutoff_kmax << "; |E1(r_wall = r0 2^-" << cfg.cutoff_kmax << ")| / |E_acc| = "
             << io::format_short(std::abs(frozen.back().energy) / std::abs(eacc)) << '\n';
    } else if (command == "selfcheck") {
      auto rep = integrator_selfcheck();
      const auto ids = specfun_identities();
      rep.rows.insert(rep.rows.end(), ids.rows.begin(), ids.rows.end());
      rep.pass = rep.pass && ids.pass;
      io::Table t{"selfcheck", {"check", "kappa", "nu", "max_rel_dev", "threshold", "pass"}, {}};
      for (const auto& r : rep.rows)
        t.rows.push_back({r.function, io::format_real(r.kappa), io::format_real(r.nu), io::format_real(r.max_rel_dev),
                          io::format_real(r.threshold), io::format_bool(r.pass)});
      emit(t);
      detail::print_selfcheck(report, rep);
      if (!rep.pass) return exit_numerical;
    } else {
      std::string known;
      for (const auto& c : commands()) known += (known.empty() ? "" : ", ") + c;
      throw config_error("unknown command '" + std::string(command) + "' (expected one of " + known + ")");
    }
  } catch (const error& e) {
    const std::string what = e.what();
    const std::string prefix = std::string(command) + ": ";
    err << "error: " << (what.rfind(prefix, 0) == 0 ? "" : prefix) << what << '\n';
    return e.numerical() ? exit_numerical : exit_config;
  }
  return exit_ok;
}

} // namespace dipole::cli
