#pragma once

// Special functions for the radial problem: complex log-gamma, Kummer's
// confluent hypergeometric series, Whittaker functions M and W with an
// imaginary second index i*nu, and the small-argument cosine form of W.
//
// Whittaker's equation with second index i*nu reads
//   w'' + (-1/4 + k/x + (1/4 + nu^2)/x^2) w = 0.
// The radial equation maps onto it with k = -kappa, kappa = delta/(2 tau).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "dipole/errors.hpp"

namespace dipole::specfun {

using cplx = std::complex<double>;

/// Arguments of W_{kappa, i nu}(x). `kappa` is the first Whittaker index as
/// it appears in the function, so the radial solution uses kappa = -delta/(2 tau).
struct WhittakerArgs {
  double kappa = 0;
  double nu = 1;
  double x = 1;

  void validate(const char* op) const {
    if (!(std::isfinite(kappa) && std::isfinite(nu) && nu > 0 && std::isfinite(x) && x > 0)) {
      std::ostringstream os;
      os << op << ": need nu > 0 and x > 0 (kappa = " << kappa << ", nu = " << nu
         << ", x = " << x << ")";
      throw argument_error(os.str());
    }
  }
};

/// A real number stored as mantissa * exp(log_scale), for values that leave
/// the double range (W with a large first index spans hundreds of decades).
struct ScaledReal {
  double mantissa = 0;
  double log_scale = 0;

  double value() const { return mantissa == 0 ? 0.0 : mantissa * std::exp(log_scale); }
  int sign() const { return (mantissa > 0) - (mantissa < 0); }
  double log_abs() const {
    return mantissa == 0 ? -std::numeric_limits<double>::infinity()
                         : std::log(std::abs(mantissa)) + log_scale;
  }
};

namespace detail {

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Compensated (Kahan) accumulator for complex sums.
struct KahanComplex {
  double re = 0, im = 0, cre = 0, cim = 0;
  void add(cplx v) {
    double y = v.real() - cre;
    double t = re + y;
    cre = (t - re) - y;
    re = t;
    y = v.imag() - cim;
    t = im + y;
    cim = (t - im) - y;
    im = t;
  }
  cplx value() const { return {re, im}; }
};

inline bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

// log(sin(pi z)) without overflow for large |Im z|. Only exp() of the
// result is used downstream, so the branch is immaterial.
inline cplx log_sin_pi(cplx z) {
  const cplx w = pi * z;
  if (std::abs(w.imag()) < 20.0) return std::log(std::sin(w));
  if (w.imag() > 0)
    return std::log(cplx(0.0, 0.5)) - I * w + std::log(1.0 - std::exp(2.0 * I * w));
  return std::log(cplx(0.0, -0.5)) + I * w + std::log(1.0 - std::exp(-2.0 * I * w));
}

} // namespace detail

/// Principal-branch log Gamma via the g = 7, 9-term Lanczos approximation,
/// with reflection for Re z < 1/2.
inline cplx lngamma_complex(cplx z) {
  using detail::pi;
  if (detail::is_nonpositive_integer(z)) {
    std::ostringstream os;
    os << "lngamma_complex: pole at z = " << z.real();
    throw pole_error(os.str());
  }
  if (z.real() < 0.5) {
    return std::log(pi) - detail::log_sin_pi(z) - lngamma_complex(1.0 - z);
  }
  static constexpr double g = 7.0;
  static constexpr std::array<double, 9> coef = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  const cplx zm = z - 1.0;
  cplx sum = coef[0];
  for (std::size_t i = 1; i < coef.size(); ++i) sum += coef[i] / (zm + static_cast<double>(i));
  const cplx t = zm + g + 0.5;
  return 0.5 * std::log(2.0 * pi) + (zm + 0.5) * std::log(t) - t + std::log(sum);
}

inline cplx gamma_complex(cplx z) { return std::exp(lngamma_complex(z)); }

/// Kummer's function 1F1(a; b; x) by direct power series.
///
/// Terms are summed with compensation until the tail bound falls below
/// 1e-16 of the partial sum; more than `max_terms` terms is an accuracy error.
inline cplx kummer_m(cplx a, cplx b, double x, int max_terms = 500) {
  if (detail::is_nonpositive_integer(b)) {
    std::ostringstream os;
    os << "kummer_m: b = " << b.real() << " is a nonpositive integer";
    throw pole_error(os.str());
  }
  if (!(std::isfinite(x) && x >= 0)) throw argument_error("kummer_m: x must be finite and >= 0");
  if (x == 0) return 1.0;

  detail::KahanComplex sum;
  cplx term = 1.0;
  sum.add(term);
  for (int k = 0; k < max_terms; ++k) {
    const double kd = k;
    const cplx ratio = (a + kd) / ((b + kd) * (kd + 1.0)) * x;
    term *= ratio;
    sum.add(term);
    if (term == 0.0) return sum.value();
    const double r = std::abs(ratio);
    // Geometric tail bound once the ratio has settled below 1/2; later ratios
    // only shrink because |a + k| / |b + k| -> 1 and x / (k + 1) decreases.
    if (r < 0.5 && kd + 1.0 > x && std::abs(term) * r / (1.0 - r) <= 1e-16 * std::abs(sum.value()))
      return sum.value();
  }
  std::ostringstream os;
  os << "kummer_m: series did not converge in " << max_terms << " terms (a = " << a
     << ", b = " << b << ", x = " << x << ")";
  throw accuracy_error(os.str());
}

namespace detail {

// log M_{k,mu}(x) = -x/2 + (1/2 + mu) ln x + ln 1F1(1/2 + mu - k; 1 + 2 mu; x)
inline cplx log_whittaker_m(double k, cplx mu, double x) {
  const cplx f = kummer_m(0.5 + mu - k, 1.0 + 2.0 * mu, x);
  return -0.5 * x + (0.5 + mu) * std::log(x) + std::log(f);
}

} // namespace detail

/// M_{k,mu}(x) for general complex mu. Used internally and by regression
/// tests against real-order closed forms.
inline cplx whittaker_m_general(double k, cplx mu, double x) {
  if (!(x > 0)) throw argument_error("whittaker_m_general: x must be > 0");
  const cplx f = kummer_m(0.5 + mu - k, 1.0 + 2.0 * mu, x);
  return std::exp(-0.5 * x + (0.5 + mu) * std::log(x)) * f;
}

/// M_{kappa, i nu}(x) = e^{-x/2} x^{1/2 + i nu} 1F1(1/2 + i nu - kappa; 1 + 2 i nu; x).
inline cplx whittaker_m_imag(const WhittakerArgs& args) {
  args.validate("whittaker_m_imag");
  return whittaker_m_general(args.kappa, cplx(0.0, args.nu), args.x);
}

/// M and dM/dx together (series for both).
inline std::array<cplx, 2> whittaker_m_imag_with_derivative(const WhittakerArgs& args) {
  args.validate("whittaker_m_imag_with_derivative");
  const cplx mu(0.0, args.nu);
  const cplx a = 0.5 + mu - args.kappa;
  const cplx b = 1.0 + 2.0 * mu;
  const double x = args.x;
  const cplx pre = std::exp(-0.5 * x + (0.5 + mu) * std::log(x));
  const cplx f = kummer_m(a, b, x);
  const cplx df = a / b * kummer_m(a + 1.0, b + 1.0, x);
  const cplx m = pre * f;
  return {m, m * (-0.5 + (0.5 + mu) / x) + pre * df};
}

/// Which evaluation route whittaker_w_imag takes for given arguments.
enum class WPath { m_combination, laplace_integral, asymptotic };

inline const char* to_string(WPath p) {
  switch (p) {
  case WPath::m_combination: return "m_combination";
  case WPath::laplace_integral: return "laplace_integral";
  case WPath::asymptotic: return "asymptotic";
  }
  return "?";
}

namespace detail {

inline constexpr double min_nu = 1e-3;
// Loss (in e-folds) tolerated when W is formed from the two M terms.
inline constexpr double combination_loss_budget = 7.0;
inline constexpr double combination_loss_limit = 16.0;

inline void check_nu_conditioning(const WhittakerArgs& args, const char* op) {
  if (args.nu < min_nu) {
    std::ostringstream os;
    os << op << ": nu = " << args.nu << " < " << min_nu
       << "; Gamma(+-2 i nu) is too ill-conditioned near nu = 0";
    throw conditioning_error(os.str());
  }
}

/// Switch point to the large-x asymptotic expansion.
inline double asymptotic_switch(double k, double nu) {
  return std::max(30.0, 2.0 * (k * k + nu * nu));
}

/// WKB estimate, in e-folds, of how far W has decayed below the dominant
/// solution between the outer turning point and x. This is the cancellation
/// suffered when W is formed from the two M terms.
inline double recessive_loss(double k, double nu, double x) {
  const double c = 0.25 + nu * nu;
  const double s = std::sqrt(k * k + c);
  const double xt = k <= 0 ? 2.0 * c / (s - k) : 2.0 * (k + s);
  if (x <= xt) return 0.0;
  // Simpson in u = ln y; integrand sqrt(q(y)) * y with q = 1/4 - k/y - c/y^2.
  const int n = 128;
  const double u0 = std::log(xt), u1 = std::log(x), h = (u1 - u0) / n;
  auto f = [&](double u) {
    const double y = std::exp(u);
    const double q = 0.25 - k / y - c / (y * y);
    return q > 0 ? std::sqrt(q) * y : 0.0;
  };
  double acc = f(u0) + f(u1);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(u0 + i * h);
  return 2.0 * acc * h / 3.0;
}

struct CombinationTerms {
  cplx first;   // Gamma(-2 i nu)/Gamma(1/2 - i nu - k) M_{k, i nu}(x), scaled
  cplx second;  // Gamma(2 i nu)/Gamma(1/2 + i nu - k) M_{k, -i nu}(x), scaled
  double log_scale;
};

/// The two gamma-weighted M terms, each evaluated from its own series and
/// brought to a common exponent.
inline CombinationTerms w_combination_terms(double k, double nu, double x) {
  const cplx mu(0.0, nu);
  const cplx l1 = lngamma_complex(-2.0 * mu) - lngamma_complex(0.5 - mu - k) + log_whittaker_m(k, mu, x);
  const cplx l2 = lngamma_complex(2.0 * mu) - lngamma_complex(0.5 + mu - k) + log_whittaker_m(k, -mu, x);
  const double s = std::max(l1.real(), l2.real());
  return {std::exp(l1 - s), std::exp(l2 - s), s};
}

inline ScaledReal w_from_m_combination(double k, double nu, double x) {
  const CombinationTerms t = w_combination_terms(k, nu, x);
  const cplx sum = t.first + t.second;
  const double residue = std::abs(sum.imag()) / (std::abs(t.first) + std::abs(t.second));
  if (!(residue <= 1e-10)) {
    std::ostringstream os;
    os << "whittaker_w_imag: imaginary residue " << residue << " of the M combination exceeds 1e-10"
       << " (kappa = " << k << ", nu = " << nu << ", x = " << x << ")";
    throw accuracy_error(os.str());
  }
  return {sum.real(), t.log_scale};
}

/// W from Tricomi's U through its Laplace integral, valid for k < 1/2:
///   W = e^{-x/2} x^{1/2 + i nu} / Gamma(a) * int_0^inf e^{-x t} t^{a-1} (1+t)^{-p + i nu} dt
/// with a = p + i nu, p = 1/2 - k. With t = e^s the integrand is smooth and
/// decays on both sides, so the trapezoidal rule converges geometrically.
inline ScaledReal w_from_laplace_integral(double k, double nu, double x) {
  const double p = 0.5 - k;
  if (!(p > 0)) throw argument_error("w_from_laplace_integral: needs kappa < 1/2");

  auto logmag = [&](double s) {
    const double es = std::exp(s);
    return -x * es - p * (s < 0 ? -s + std::log1p(es) : std::log1p(1.0 / es));
  };
  auto phase = [&](double s) { return nu * (s + (s > 30 ? s : std::log1p(std::exp(s)))); };

  const double u_peak = 2.0 * p / (x + std::sqrt(x * x + 4.0 * x * p));
  const double s_peak = std::log(u_peak);
  const double f_peak = logmag(s_peak);
  constexpr double drop = 46.0;

  double left = 1.0;
  while (logmag(s_peak - left) > f_peak - drop) left *= 2.0;
  double right = 0.5;
  while (logmag(s_peak + right) > f_peak - drop) right *= 2.0;
  const double s0 = s_peak - left, s1 = s_peak + right;

  auto term = [&](double s) { return std::exp(logmag(s) - f_peak) * std::polar(1.0, phase(s)); };

  int n = std::max(16, static_cast<int>(std::ceil((s1 - s0) / 0.25)));
  double h = (s1 - s0) / n;
  KahanComplex sum;
  double abs_sum = 0;
  for (int i = 0; i <= n; ++i) {
    const cplx t = term(s0 + i * h) * ((i == 0 || i == n) ? 0.5 : 1.0);
    sum.add(t);
    abs_sum += std::abs(t);
  }
  cplx integral = sum.value() * h;
  bool converged = false;
  for (int level = 0; level < 8; ++level) {
    for (int i = 0; i < n; ++i) {
      const cplx t = term(s0 + (i + 0.5) * h);
      sum.add(t);
      abs_sum += std::abs(t);
    }
    n *= 2;
    h *= 0.5;
    const cplx refined = sum.value() * h;
    const double change = std::abs(refined - integral);
    integral = refined;
    if (change <= 4e-15 * abs_sum * h) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "whittaker_w_imag: Laplace integral did not converge (kappa = " << k << ", nu = " << nu
       << ", x = " << x << ")";
    throw accuracy_error(os.str());
  }

  const cplx a(p, nu);
  const cplx c = -0.5 * x + cplx(0.5, nu) * std::log(x) - lngamma_complex(a);
  const cplx rotated = std::polar(1.0, c.imag()) * integral;
  const double residue = std::abs(rotated.imag()) / (abs_sum * h);
  if (!(residue <= 1e-10)) {
    std::ostringstream os;
    os << "whittaker_w_imag: imaginary residue " << residue << " of the Laplace integral exceeds 1e-10"
       << " (kappa = " << k << ", nu = " << nu << ", x = " << x << ")";
    throw accuracy_error(os.str());
  }
  return {rotated.real(), c.real() + f_peak};
}

inline constexpr double asymptotic_tolerance = 1e-13;

struct AsymptoticSum {
  double sum;
  double smallest; // last term kept, the truncation error estimate
};

// sum_n |(1/2 - k + i nu)_n|^2 / n! (-x)^{-n}, truncated before its smallest term
inline AsymptoticSum asymptotic_sum(double k, double nu, double x) {
  double term = 1.0, sum = 1.0, smallest = 1.0;
  for (int n = 1; n < 400; ++n) {
    const double c = n - 0.5 - k;
    const double next = -term * (c * c + nu * nu) / (n * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    smallest = std::abs(term);
    if (smallest < 1e-17) break;
  }
  return {sum, smallest};
}

/// Large-x expansion W ~ e^{-x/2} x^k * asymptotic_sum. Throws if the
/// smallest term exceeds the tolerance.
inline ScaledReal w_from_asymptotic(double k, double nu, double x) {
  const auto [sum, smallest] = asymptotic_sum(k, nu, x);
  if (smallest > asymptotic_tolerance) {
    std::ostringstream os;
    os << "whittaker_w_imag: asymptotic series smallest term " << smallest
       << " too large (kappa = " << k << ", nu = " << nu << ", x = " << x << ")";
    throw accuracy_error(os.str());
  }
  return {sum, -0.5 * x + k * std::log(x)};
}

} // namespace detail

/// Route taken by whittaker_w_imag: the asymptotic series beyond
/// max(30, 2(kappa^2 + nu^2)) once its smallest term is below 1e-13; the M combination while its cancellation stays
/// within budget; otherwise the Laplace integral (kappa < 1/2).
inline WPath whittaker_w_path(const WhittakerArgs& args) {
  args.validate("whittaker_w_path");
  if (args.x > detail::asymptotic_switch(args.kappa, args.nu) &&
      detail::asymptotic_sum(args.kappa, args.nu, args.x).smallest <= detail::asymptotic_tolerance)
    return WPath::asymptotic;
  const double loss = detail::recessive_loss(args.kappa, args.nu, args.x);
  if (loss <= detail::combination_loss_budget) return WPath::m_combination;
  if (args.kappa < 0.5) return WPath::laplace_integral;
  if (loss <= detail::combination_loss_limit) return WPath::m_combination;
  std::ostringstream os;
  os << "whittaker_w_imag: cancellation of " << loss
     << " e-folds in the M combination and no integral route for kappa >= 1/2 (kappa = "
     << args.kappa << ", nu = " << args.nu << ", x = " << args.x << ")";
  throw accuracy_error(os.str());
}

/// W_{kappa, i nu}(x) as mantissa * exp(log_scale).
inline ScaledReal whittaker_w_imag_scaled(const WhittakerArgs& args) {
  args.validate("whittaker_w_imag");
  detail::check_nu_conditioning(args, "whittaker_w_imag");
  switch (whittaker_w_path(args)) {
  case WPath::asymptotic: return detail::w_from_asymptotic(args.kappa, args.nu, args.x);
  case WPath::m_combination: return detail::w_from_m_combination(args.kappa, args.nu, args.x);
  case WPath::laplace_integral: return detail::w_from_laplace_integral(args.kappa, args.nu, args.x);
  }
  throw accuracy_error("whittaker_w_imag: no evaluation route");
}

/// W_{kappa, i nu}(x), real for real kappa and x > 0.
inline double whittaker_w_imag(const WhittakerArgs& args) {
  const ScaledReal w = whittaker_w_imag_scaled(args);
  const double v = w.value();
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "whittaker_w_imag: |W| = exp(" << w.log_abs() << ") overflows double (kappa = "
       << args.kappa << ", nu = " << args.nu << ", x = " << args.x << "); use the scaled form";
    throw accuracy_error(os.str());
  }
  return v;
}

/// The full complex value of
///   Gamma(-2 i nu)/Gamma(1/2 - i nu - kappa) M_{kappa,i nu}(x)
/// + Gamma(2 i nu)/Gamma(1/2 + i nu - kappa) M_{kappa,-i nu}(x)
/// with both M terms from independent series. Its imaginary part vanishes.
inline cplx whittaker_w_imag_combination(const WhittakerArgs& args) {
  args.validate("whittaker_w_imag_combination");
  detail::check_nu_conditioning(args, "whittaker_w_imag_combination");
  const auto t = detail::w_combination_terms(args.kappa, args.nu, args.x);
  return (t.first + t.second) * std::exp(t.log_scale);
}

/// W and dW/dx from the M combination; only where that route is accurate.
inline std::array<double, 2> whittaker_w_imag_with_derivative(const WhittakerArgs& args) {
  args.validate("whittaker_w_imag_with_derivative");
  detail::check_nu_conditioning(args, "whittaker_w_imag_with_derivative");
  const double loss = detail::recessive_loss(args.kappa, args.nu, args.x);
  if (loss > detail::combination_loss_budget) {
    std::ostringstream os;
    os << "whittaker_w_imag_with_derivative: x = " << args.x << " is " << loss
       << " e-folds into the recessive region";
    throw accuracy_error(os.str());
  }
  const cplx mu(0.0, args.nu);
  const cplx c = std::exp(lngamma_complex(-2.0 * mu) - lngamma_complex(0.5 - mu - args.kappa));
  const auto md = whittaker_m_imag_with_derivative(args);
  return {2.0 * (c * md[0]).real(), 2.0 * (c * md[1]).real()};
}

/// Small-x cosine form of W_{-kappa, i nu}(x):
///   2 A sqrt(x) cos(2 nu + nu ln(beta x / (4 nu^2)) + pi/4),
///   A = e^{-nu pi + beta} / (sqrt(2 nu) beta^{beta - 1/2}), beta = 1/2 + kappa.
/// `kappa_r` is delta/(2 tau), i.e. minus the first Whittaker index.
inline double smallx_phase(double kappa_r, double nu, double x) {
  const double beta = 0.5 + kappa_r;
  const double bx = beta * x;
  if (!(bx > 0) || !(nu > 0)) {
    std::ostringstream os;
    os << "smallx_phase: need beta * x > 0 and nu > 0 (beta = " << beta << ", x = " << x << ")";
    throw argument_error(os.str());
  }
  return 2.0 * nu + nu * std::log(bx / (4.0 * nu * nu)) + detail::pi / 4.0;
}

inline double smallx_log_amplitude(double kappa_r, double nu) {
  const double beta = 0.5 + kappa_r;
  if (!(beta > 0) || !(nu > 0)) {
    std::ostringstream os;
    os << "smallx amplitude: need beta = 1/2 + kappa > 0 and nu > 0 (beta = " << beta << ")";
    throw argument_error(os.str());
  }
  return -nu * detail::pi + beta - 0.5 * std::log(2.0 * nu) - (beta - 0.5) * std::log(beta);
}

inline ScaledReal whittaker_w_smallx_scaled(double kappa_r, double nu, double x) {
  if (!(x > 0)) throw argument_error("whittaker_w_smallx: x must be > 0");
  const double log_a = smallx_log_amplitude(kappa_r, nu);
  return {2.0 * std::cos(smallx_phase(kappa_r, nu, x)), log_a + 0.5 * std::log(x)};
}

inline double whittaker_w_smallx(double kappa_r, double nu, double x) {
  return whittaker_w_smallx_scaled(kappa_r, nu, x).value();
}

} // namespace dipole::specfun
