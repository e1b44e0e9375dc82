// dipole: spectra of a polarizable particle outside a charged cylinder.
//
//   dipole <command> [--config FILE] [--m M] [--ell L] ...
//
// Flags override values read from the config file.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dipole/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bound states of a polarizable particle outside a charged non-conductive cylinder"};
  app.footer(
      "Commands: potential, field, spectrum, solve, compare, wavefunction, cutoff-scan, selfcheck.\n"
      "Config files hold 'key = value' lines (keys as the flags with '-' -> '_'); flags win.\n"
      "Exit codes: 0 success, 1 configuration or regime error, 2 numerical failure.");

  std::string command;
  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(dipole::cli::commands()));
  std::string config_path;
  app.add_option("--config", config_path, "Configuration file");

  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  const std::vector<Flag> flags = {
      {"--m", "m", "Particle mass (required)"},
      {"--alpha", "alpha", "Polarizability (required)"},
      {"--rho0", "rho0", "Charge density scale (required)"},
      {"--r0", "r0", "Inner cylinder radius (required)"},
      {"--ell", "ell", "Angular momentum, integer (required)"},
      {"--nmax", "nmax", "Number of levels [5]"},
      {"--window-lo", "window_lo", "Lower end of the energy window [from the n=1 level and accumulation energy]"},
      {"--window-hi", "window_hi", "Upper end of the energy window, below -alpha rho0^2 r0^2"},
      {"--rmax-mult", "rmax_mult", "tau (r_max - r_wall) at the top of the window [25]"},
      {"--steps", "steps", "RK4 steps in ln r, >= 1000 [40000]"},
      {"--x0-threshold", "x0_threshold", "Small-x0 flag threshold [0.1]"},
      {"--out", "out", "Output file [stdout]"},
      {"--format", "format", "csv or tsv [csv]"},
      {"--r-wall", "r_wall", "Move the hard wall, keeping the r0 coefficients [r0]"},
      {"--points", "points", "Rows for potential/field, profile samples [200]"},
      {"--r-end-mult", "r_end_mult", "potential/field sampled up to this multiple of r0 [10]"},
      {"--level", "level", "wavefunction: level number [1]"},
      {"--energy", "energy", "wavefunction: shoot at this energy instead"},
      {"--cutoff-kmax", "cutoff_kmax", "cutoff-scan: r_wall = r0 2^-k for k = 0..kmax [20]"},
  };
  std::vector<std::string> values(flags.size());
  std::vector<CLI::Option*> options;
  for (std::size_t i = 0; i < flags.size(); ++i)
    options.push_back(app.add_option(flags[i].name, values[i], flags[i].help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : dipole::cli::exit_config;
  }

  try {
    std::string contents;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw dipole::config_error("cannot read config file '" + config_path + "'");
      std::ostringstream ss;
      ss << is.rdbuf();
      contents = ss.str();
    }
    dipole::io::Overrides overrides;
    for (std::size_t i = 0; i < flags.size(); ++i)
      if (options[i]->count()) overrides[flags[i].key] = values[i];
    const auto cfg = dipole::io::parse_config(contents, overrides);
    return dipole::cli::run(command, cfg, std::cout, std::cerr);
  } catch (const dipole::error& e) {
    std::cerr << "error: " << command << ": " << e.what() << '\n';
    return e.numerical() ? dipole::cli::exit_numerical : dipole::cli::exit_config;
  }
}
