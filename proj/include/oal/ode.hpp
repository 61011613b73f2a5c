#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "oal/errors.hpp"

namespace oal {

struct OdeOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double h_init = 1e-3;
  double h_min = 1e-12;
  double h_max = 1.0;
  long max_steps = 100000000L;
};

// Embedded Dormand-Prince 5(4) step. Returns the 5th-order solution and the
// embedded error estimate; `k1` may carry f(t,y) in and f(t+h, y5) out (FSAL).
template <typename Vec, typename Rhs>
void dopri5_step(const Rhs& f, double t, double h, const Vec& y, Vec& k1,
                 Vec& y5, double& err_norm, double atol, double rtol) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Vec k2 = f(t + c2 * h, y + h * (a21 * k1));
  Vec k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
  Vec k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  Vec k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  Vec k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  Vec k7 = f(t + h, y5);
  Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
    double q = std::abs(err[i]) / sc;
    acc += q * q;
  }
  err_norm = std::sqrt(acc / static_cast<double>(err.size()));
  k1 = k7;
}

// Integrate y' = f(t, y) from t0 to t1 with adaptive steps. `observer`, when
// given, is called after every accepted step and may return false to stop.
template <typename Vec, typename Rhs,
          typename Obs = std::function<bool(double, const Vec&)>>
void integrate_adaptive(const Rhs& f, Vec& y, double t0, double t1,
                        const OdeOptions& opts = {}, Obs observer = {}) {
  double t = t0;
  double h = std::min(opts.h_init, t1 - t0);
  Vec k1 = f(t, y);
  Vec y5;
  long steps = 0;
  while (t < t1) {
    if (++steps > opts.max_steps)
      throw ConvergenceError("ode: step budget exhausted at t=" + std::to_string(t));
    double h_try = std::min(h, t1 - t);
    double err;
    Vec k1_saved = k1;
    dopri5_step(f, t, h_try, y, k1, y5, err, opts.abs_tol, opts.rel_tol);
    if (err <= 1.0) {
      t += h_try;
      y = y5;
      if (observer && !observer(t, y)) return;
    } else {
      k1 = k1_saved;  // FSAL invalidated by rejection
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h = h_try * std::clamp(fac, 0.2, 5.0);
    // Only rejection-driven shrink counts as stiffness; the end-of-interval
    // clamp can make h_try arbitrarily small.
    if (err > 1.0 && h < opts.h_min)
      throw ConvergenceError("ode: step size underflow (stiffness) at t=" +
                             std::to_string(t));
    h = std::min(h, opts.h_max);
  }
}

}  // namespace oal
