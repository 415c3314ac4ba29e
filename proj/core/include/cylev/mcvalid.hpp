#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cylev {

/// Monte Carlo estimate of E exp(i theta X) with the distribution-free
/// per-component envelope 4 / sqrt(M).
struct CFEstimate {
  double theta = 0.0;
  std::complex<double> estimate = 1.0;
  std::size_t samples = 0;
  double bound = 0.0;
};

double cf_error_bound(std::size_t samples);

/// Empirical characteristic function on a theta grid. Sums are accumulated
/// in fixed point, so the result does not depend on the order of the samples.
std::vector<CFEstimate> empirical_cf(std::span<const double> samples,
                                     std::span<const double> thetas);

struct PointDeviation {
  double theta = 0.0;
  double real_deviation = 0.0;
  double imag_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct CFComparison {
  std::vector<PointDeviation> points;
  double max_deviation = 0.0;
  std::optional<std::size_t> worst;
  bool pass = true;
  std::string warning;
};

/// Passes iff |Re| and |Im| deviations are within bound + allowance at every point.
CFComparison cf_compare(std::span<const CFEstimate> estimates,
                        const std::function<std::complex<double>(double)>& analytic,
                        double allowance = 0.0);

struct KSResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = true;
  std::size_t samples = 0;
};

/// P(K <= x) for the Kolmogorov distribution.
double kolmogorov_cdf(double x);
/// Upper quantile of the Kolmogorov distribution: P(K > x) = level.
double kolmogorov_critical_value(double level);

/// One-sample Kolmogorov-Smirnov test with the asymptotic critical value.
KSResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf,
                 double level);

double normal_cdf(double x, double mean = 0.0, double variance = 1.0);

}  // namespace cylev
