#pragma once

#include <stdexcept>
#include <string>

namespace dipole {

/// Root of all library errors. `numerical()` separates failures of the
/// numerics (exit code 2 in the CLI) from bad inputs (exit code 1).
class error : public std::runtime_error {
public:
  explicit error(const std::string& what, bool numerical = false)
      : std::runtime_error(what), numerical_(numerical) {}
  bool numerical() const noexcept { return numerical_; }

private:
  bool numerical_;
};

// r < r0: the interior of the cylinder is excluded.
class domain_error : public error {
public:
  explicit domain_error(const std::string& what) : error(what) {}
};

// l^2 >= 2 m alpha rho0^2 r0^4: no Whittaker function of imaginary order.
class regime_error : public error {
public:
  explicit regime_error(const std::string& what) : error(what) {}
};

// Energy at or above -alpha rho0^2 r0^2, so tau is not real.
class imaginary_tau_error : public error {
public:
  explicit imaginary_tau_error(const std::string& what) : error(what) {}
};

class argument_error : public error {
public:
  explicit argument_error(const std::string& what) : error(what) {}
};

class config_error : public error {
public:
  explicit config_error(const std::string& what) : error(what) {}
};

class pole_error : public error {
public:
  explicit pole_error(const std::string& what) : error(what, true) {}
};

class accuracy_error : public error {
public:
  explicit accuracy_error(const std::string& what) : error(what, true) {}
};

class conditioning_error : public error {
public:
  explicit conditioning_error(const std::string& what) : error(what, true) {}
};

} // namespace dipole
