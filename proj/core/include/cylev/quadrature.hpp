#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "cylev/errors.hpp"

namespace cylev::quad {

struct Tolerance {
  double absolute = 1e-10;
  double relative = 1e-9;
  unsigned max_levels = 20;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
};

using RealFunction = std::function<double(double)>;

/// Integral over the finite interval [a, b]. Integrable endpoint singularities
/// are fine; interior kinks must be split by the caller.
Result integrate(const RealFunction& f, double a, double b, const Tolerance& tol = {});

/// Integral over [a, inf) of a non-oscillatory integrand.
Result integrate_to_infinity(const RealFunction& f, double a, const Tolerance& tol = {});

/// Integral over [a, inf) of an oscillating integrand with decaying envelope.
/// `first_zero` is the first sign change after `a` and `half_period` the
/// spacing of later ones. Panel sums are accelerated with Wynn's epsilon.
Result integrate_oscillatory_tail(const RealFunction& f, double a, double first_zero,
                                  double half_period, const Tolerance& tol = {});

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// estimate of the limit and an error estimate from the last two diagonals.
Result wynn_epsilon(std::span<const double> partial_sums);

/// Adaptive Simpson on [a, b]. Works for real or complex valued integrands.
template <class F>
auto adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-9, int max_depth = 40) {
  using V = decltype(f(a));
  struct Frame {
    static V run(F& g, double lo, double hi, V f_lo, V f_mid, V f_hi, V whole, double tol, int depth,
                 int& failures) {
      const double mid = 0.5 * (lo + hi);
      const double lm = 0.5 * (lo + mid);
      const double rm = 0.5 * (mid + hi);
      const V f_lm = g(lm);
      const V f_rm = g(rm);
      const V left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid);
      const V right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi);
      const V delta = left + right - whole;
      if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      if (depth <= 0) {
        ++failures;
        return left + right + delta / 15.0;
      }
      return run(g, lo, mid, f_lo, f_lm, f_mid, left, 0.5 * tol, depth - 1, failures) +
             run(g, mid, hi, f_mid, f_rm, f_hi, right, 0.5 * tol, depth - 1, failures);
    }
  };
  if (b == a) return V{};
  const double mid = 0.5 * (a + b);
  const V fa = f(a);
  const V fm = f(mid);
  const V fb = f(b);
  int failures = 0;
  // Seed with a fixed split so that integrands vanishing at the three initial
  // nodes are not mistaken for zero.
  const double q1 = a + 0.25 * (b - a);
  const double q3 = a + 0.75 * (b - a);
  const V f1 = f(q1);
  const V f3 = f(q3);
  const V left = (mid - a) / 6.0 * (fa + 4.0 * f1 + fm);
  const V right = (b - mid) / 6.0 * (fm + 4.0 * f3 + fb);
  const V result = Frame::run(f, a, mid, fa, f1, fm, left, 0.5 * abs_tol, max_depth, failures) +
                   Frame::run(f, mid, b, fm, f3, fb, right, 0.5 * abs_tol, max_depth, failures);
  if (failures > 0) {
    throw NumericError("adaptive Simpson did not converge on [" + std::to_string(a) + ", " +
                       std::to_string(b) + "]");
  }
  return result;
}

}  // namespace cylev::quad
