#pragma once

// Fixed-step classical Runge-Kutta for linear second-order equations
// y'' = q(t) y, carried as the pair (y, y').

#include <array>

namespace dipole::ode {

template <class T>
using State = std::array<T, 2>;

/// One RK4 step of size h (negative h integrates backwards). The caller
/// supplies q at t, t + h/2 and t + h so that tabulated coefficients can be
/// reused across many integrations on one grid.
template <class T>
inline State<T> rk4_linear_step(const State<T>& y, double h, double q0, double qh, double q1) {
  const T k1y = y[1];
  const T k1v = q0 * y[0];
  const T k2y = y[1] + 0.5 * h * k1v;
  const T k2v = qh * (y[0] + 0.5 * h * k1y);
  const T k3y = y[1] + 0.5 * h * k2v;
  const T k3v = qh * (y[0] + 0.5 * h * k2y);
  const T k4y = y[1] + h * k3v;
  const T k4v = q1 * (y[0] + h * k3y);
  return {y[0] + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
          y[1] + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

/// Integrates y'' = q(t) y from t0 to t1 in `steps` equal steps, calling
/// sink(t, y) at every grid point including both ends.
template <class T, class Q, class Sink>
inline State<T> integrate_linear(const Q& q, double t0, double t1, State<T> y, int steps, Sink&& sink) {
  const double h = (t1 - t0) / steps;
  double qa = q(t0);
  sink(t0, y);
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const double tn = (i + 1 == steps) ? t1 : t + h;
    const double qm = q(t + 0.5 * h);
    const double qb = q(tn);
    y = rk4_linear_step(y, h, qa, qm, qb);
    qa = qb;
    sink(tn, y);
  }
  return y;
}

template <class T, class Q>
inline State<T> integrate_linear(const Q& q, double t0, double t1, State<T> y, int steps) {
  return integrate_linear(q, t0, t1, y, steps, [](double, const State<T>&) {});
}

} // namespace dipole::ode
