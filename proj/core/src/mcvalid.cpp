#include "cylev/mcvalid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace cylev {
namespace {

__extension__ using int128 = __int128;
using std::numbers::pi;

// Fixed-point scale for cos/sin terms; |term| <= 2^62 fits an int64 and a sum
// of up to 2^64 terms fits the 128-bit accumulator.
constexpr int kFixedBits = 62;

std::int64_t to_fixed(double x) { return std::llround(std::ldexp(x, kFixedBits)); }

double fixed_mean(int128 sum, std::size_t count) {
  const auto n = static_cast<int128>(count);
  int128 q = sum / n;
  int128 r = sum % n;
  const double mean = static_cast<double>(q) + static_cast<double>(r) / static_cast<double>(count);
  return std::ldexp(mean, -kFixedBits);
}

}  // namespace

double cf_error_bound(std::size_t samples) {
  if (samples == 0) throw std::invalid_argument("sample count must be >= 1");
  return 4.0 / std::sqrt(static_cast<double>(samples));
}

std::vector<CFEstimate> empirical_cf(std::span<const double> samples,
                                     std::span<const double> thetas) {
  if (samples.empty()) throw std::invalid_argument("empirical characteristic function needs samples");
  std::vector<CFEstimate> out;
  out.reserve(thetas.size());
  const double bound = cf_error_bound(samples.size());
  for (double theta : thetas) {
    int128 re = 0;
    int128 im = 0;
    for (double x : samples) {
      const double angle = theta * x;
      re += to_fixed(std::cos(angle));
      im += to_fixed(std::sin(angle));
    }
    out.push_back({theta, {fixed_mean(re, samples.size()), fixed_mean(im, samples.size())},
                   samples.size(), bound});
  }
  return out;
}

CFComparison cf_compare(std::span<const CFEstimate> estimates,
                        const std::function<std::complex<double>(double)>& analytic,
                        double allowance) {
  CFComparison report;
  if (estimates.empty()) {
    report.warning = "empty theta grid: comparison is vacuous";
    return report;
  }
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const CFEstimate& e = estimates[i];
    const std::complex<double> exact = analytic(e.theta);
    PointDeviation p;
    p.theta = e.theta;
    p.real_deviation = std::abs(e.estimate.real() - exact.real());
    p.imag_deviation = std::abs(e.estimate.imag() - exact.imag());
    p.tolerance = e.bound + allowance;
    p.pass = p.real_deviation <= p.tolerance && p.imag_deviation <= p.tolerance;
    const double dev = std::max(p.real_deviation, p.imag_deviation);
    if (!report.worst || dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst = i;
    }
    report.pass = report.pass && p.pass;
    report.points.push_back(p);
  }
  return report;
}

double kolmogorov_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x < 0.2) {
    // Jacobi theta form converges fast for small x.
    const double pi2 = pi * pi;
    double sum = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double j = 2.0 * k - 1.0;
      sum += std::exp(-j * j * pi2 / (8.0 * x * x));
    }
    return std::sqrt(2.0 * pi) / x * sum;
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return 1.0 - 2.0 * sum;
}

double kolmogorov_critical_value(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("KS level must lie in (0, 1)");
  double lo = 0.0;
  double hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (1.0 - kolmogorov_cdf(mid) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

KSResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf,
                 double level) {
  if (samples.empty()) throw std::invalid_argument("KS test needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  KSResult r;
  r.statistic = d;
  r.critical = kolmogorov_critical_value(level) / std::sqrt(n);
  r.pass = d <= r.critical;
  r.samples = samples.size();
  return r;
}

double normal_cdf(double x, double mean, double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("normal variance must be positive");
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

}  // namespace cylev
