#include "cylev/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace cylev::quad {
namespace {

void require_converged(const Result& r, double l1, const Tolerance& tol, const char* what, double a,
                       double b) {
  const double budget = std::max(tol.absolute, tol.relative * l1);
  if (!std::isfinite(r.value) || r.error > budget) {
    throw NumericError(std::string(what) + " did not reach tolerance on [" + std::to_string(a) +
                       ", " + std::to_string(b) + "]: error estimate " + std::to_string(r.error));
  }
}

Result gauss_kronrod(const RealFunction& f, double a, double b, const Tolerance& tol) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      f, a, b, tol.max_levels, tol.relative, &error, &l1);
  Result r{value, error};
  require_converged(r, l1, tol, "Gauss-Kronrod", a, b);
  return r;
}

}  // namespace

Result integrate(const RealFunction& f, double a, double b, const Tolerance& tol) {
  if (a == b) return {};
  if (a > b) {
    const Result r = integrate(f, b, a, tol);
    return {-r.value, r.error};
  }
  boost::math::quadrature::tanh_sinh<double> integrator(tol.max_levels);
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(f, a, b, tol.relative, &error, &l1);
  Result r{value, error};
  if (r.error <= std::max(tol.absolute, tol.relative * l1) && std::isfinite(r.value)) return r;
  // Smooth but awkward integrands are sometimes handled better by bisection.
  return gauss_kronrod(f, a, b, tol);
}

Result integrate_to_infinity(const RealFunction& f, double a, const Tolerance& tol) {
  boost::math::quadrature::exp_sinh<double> integrator(tol.max_levels);
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(
      [&](double x) { return f(x); }, a, std::numeric_limits<double>::infinity(), tol.relative,
      &error, &l1);
  Result r{value, error};
  require_converged(r, l1, tol, "exp-sinh", a, std::numeric_limits<double>::infinity());
  return r;
}

Result wynn_epsilon(std::span<const double> partial_sums) {
  const std::size_t n = partial_sums.size();
  if (n == 0) return {};
  if (n < 3) return {partial_sums.back(), std::numeric_limits<double>::infinity()};
  // eps[k][j]: column k of the epsilon table; even columns are estimates.
  std::vector<std::vector<double>> eps(n + 1);
  eps[0].assign(n + 1, 0.0);
  eps[1].assign(partial_sums.begin(), partial_sums.end());
  std::vector<double> estimates;
  for (std::size_t k = 2; k <= n; ++k) {
    const auto& prev = eps[k - 1];
    const auto& prev2 = eps[k - 2];
    auto& cur = eps[k];
    cur.resize(prev.size() - 1);
    for (std::size_t j = 0; j < cur.size(); ++j) {
      const double diff = prev[j + 1] - prev[j];
      if (diff == 0.0) {
        // Converged exactly; the table degenerates.
        return {prev[j + 1], 0.0};
      }
      cur[j] = prev2[j + 1] + 1.0 / diff;
    }
    if (k % 2 == 1 && !cur.empty()) estimates.push_back(cur.back());
  }
  if (estimates.size() < 2) return {estimates.empty() ? partial_sums.back() : estimates.back(),
                                    std::abs(partial_sums[n - 1] - partial_sums[n - 2])};
  const double last = estimates.back();
  const double before = estimates[estimates.size() - 2];
  return {last, std::abs(last - before)};
}

Result integrate_oscillatory_tail(const RealFunction& f, double a, double first_zero,
                                  double half_period, const Tolerance& tol) {
  constexpr std::size_t kPanels = 40;
  std::vector<double> partial;
  partial.reserve(kPanels + 1);
  double sum = 0.0;
  double panel_error = 0.0;
  Tolerance panel_tol = tol;
  panel_tol.absolute = tol.absolute * 1e-2;
  if (first_zero > a) {
    const Result head = gauss_kronrod(f, a, first_zero, panel_tol);
    sum += head.value;
    panel_error += head.error;
  }
  partial.push_back(sum);
  double lo = std::max(a, first_zero);
  for (std::size_t i = 0; i < kPanels; ++i) {
    const Result panel = gauss_kronrod(f, lo, lo + half_period, panel_tol);
    sum += panel.value;
    panel_error += panel.error;
    partial.push_back(sum);
    lo += half_period;
  }
  // Use the tail of the sequence, where the alternation is regular.
  const std::span<const double> seq(partial.data() + 8, partial.size() - 8);
  Result r = wynn_epsilon(seq);
  r.error += panel_error;
  const double budget = std::max(tol.absolute, tol.relative * std::abs(r.value));
  if (!std::isfinite(r.value) || r.error > budget) {
    throw NumericError("oscillatory tail extrapolation did not converge from " + std::to_string(a) +
                       ": error estimate " + std::to_string(r.error));
  }
  return r;
}

}  // namespace cylev::quad
