#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library: quadrature is plain composite Gauss-Legendre, characteristic
// functions are the textbook formulas and series verdicts come from
// brute-force partial sums.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using std::numbers::pi;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussRule(int n) : nodes(n), weights(n) {
    for (int i = 0; i < n; ++i) {
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

inline const GaussRule& rule() {
  static const GaussRule r(20);
  return r;
}

/// Composite 20-point Gauss-Legendre with `panels` equal panels on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int panels = 64) {
  const GaussRule& g = rule();
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
    total += 0.5 * h * s;
  }
  return total;
}

/// int_0^inf f(x) dx for f decaying at least like a power at 0 and infinity,
/// via x = e^u over u in [lo, hi].
inline double integrate_half_line(const std::function<double(double)>& f, double split = 1.0,
                                  double lo = -80.0, double hi = 80.0) {
  const auto g = [&](double u) {
    const double x = std::exp(u);
    return f(x) * x;
  };
  const double m = std::log(split);
  return integrate(g, lo, m, 400) + integrate(g, m, hi, 400);
}

/// J(alpha) = int_0^inf (1 - cos b) b^{-1-alpha} db, so that the symmetric
/// stable measure (c^alpha / 2)|b|^{-1-alpha} has symbol -c^alpha J |theta|^alpha.
inline double stable_constant(double alpha) {
  // [0, 1]: termwise integration of the cosine series.
  double head = 0.0;
  double term = 1.0;  // b^{2n} / (2n)! coefficient with sign
  for (int n = 1; n < 30; ++n) {
    term /= (2.0 * n - 1.0) * (2.0 * n);
    head += (n % 2 == 1 ? 1.0 : -1.0) * term / (2.0 * n - alpha);
  }
  // [1, A] with A = 2 pi m, one panel per unit length.
  const double A = 2.0 * pi * 400.0;
  const double body =
      integrate([alpha](double b) { return (1.0 - std::cos(b)) * std::pow(b, -1.0 - alpha); }, 1.0, A,
                static_cast<int>(A));
  // Tail: int_A^inf b^{-1-a} - int_A^inf cos(b) b^{-1-a}; the cosine part is
  // (1 + a) A^{-2-a} + O(A^{-4-a}) at multiples of 2 pi.
  const double tail = std::pow(A, -alpha) / alpha - (1.0 + alpha) * std::pow(A, -2.0 - alpha);
  return head + body + tail;
}

/// int (|c b|^2 ^ 1) (s^alpha / 2)|b|^{-1-alpha} db by quadrature.
inline double stable_truncated_second_moment(double alpha, double scale, double c) {
  if (c == 0.0) return 0.0;
  const double a = std::abs(c);
  const auto f = [&](double b) {
    return std::min(a * a * b * b, 1.0) * std::pow(scale, alpha) * std::pow(b, -1.0 - alpha);
  };
  return integrate_half_line(f, 1.0 / a);  // both half lines: 2 * (1/2)
}

// ---------------------------------------------------------------------------
// Textbook characteristic functions at time t = 1.
// ---------------------------------------------------------------------------

inline std::complex<double> gaussian_cf(double sigma, double theta) {
  return std::exp(-0.5 * sigma * sigma * theta * theta);
}
inline std::complex<double> poisson_cf(double lambda, double jump, double theta) {
  return std::exp(lambda * (std::exp(std::complex<double>(0.0, theta * jump)) - 1.0));
}
inline std::complex<double> compensated_poisson_cf(double lambda, double jump, double theta) {
  return std::exp(lambda * (std::exp(std::complex<double>(0.0, theta * jump)) - 1.0) -
                  std::complex<double>(0.0, lambda * jump * theta));
}
inline std::complex<double> symmetric_stable_cf(double alpha, double scale, double theta) {
  return std::exp(-std::pow(scale, alpha) * stable_constant(alpha) * std::pow(std::abs(theta), alpha));
}
/// E exp(i theta S) for S >= 0 with E exp(-b S) = exp(-c b^r): exp(-c (-i theta)^r).
inline std::complex<double> positive_stable_cf(double index, double scale, double theta) {
  const std::complex<double> z(0.0, -theta);
  return std::exp(-scale * std::pow(z, index));
}

// ---------------------------------------------------------------------------
// Brute-force series classification from partial sums at N = 10^2, 10^3, 10^4.
// ---------------------------------------------------------------------------

enum class Growth { Bounded, Unbounded };

/// Sum of a_k: the block sums over (10^2, 10^3] and (10^3, 10^4] shrink for a
/// convergent power-type series and do not for a divergent one.
inline Growth sum_growth(const std::function<double(double)>& a) {
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (int k = 1; k <= 10000; ++k) {
    const double v = std::abs(a(k));
    if (k <= 100) s2 += v;
    if (k <= 1000) s3 += v;
    s4 += v;
  }
  const double d1 = s3 - s2;
  const double d2 = s4 - s3;
  return d2 < d1 || d2 == 0.0 ? Growth::Bounded : Growth::Unbounded;
}

/// sup |x_k|: bounded when the maximum over (10^3, 10^4] does not exceed the
/// maximum over [1, 10^3].
inline Growth sup_growth(const std::function<double(double)>& x) {
  double m3 = 0.0, m4 = 0.0;
  for (int k = 1; k <= 10000; ++k) {
    const double v = std::abs(x(k));
    (k <= 1000 ? m3 : m4) = std::max(k <= 1000 ? m3 : m4, v);
  }
  return m4 <= m3 ? Growth::Bounded : Growth::Unbounded;
}

/// Membership of x in l^p by brute force.
inline Growth lp_growth(const std::function<double(double)>& x, double p) {
  if (std::isinf(p)) return sup_growth(x);
  return sum_growth([&](double k) { return std::pow(std::abs(x(k)), p); });
}

}  // namespace oracle
