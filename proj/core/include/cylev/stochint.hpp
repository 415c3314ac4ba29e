#pragma once

#include <cstddef>
#include <vector>

#include "cylev/cylproc.hpp"
#include "cylev/integrability.hpp"
#include "cylev/levy1d.hpp"
#include "cylev/mcvalid.hpp"
#include "cylev/rng.hpp"

namespace cylev {

/// M draws of <int_0^T f dL, theta> by left-point Riemann sums
/// sum_j g_k(t_j) sigma_k (l_k(t_{j+1}) - l_k(t_j)).
std::vector<double> simulate_integral(const DiagonalIntegrand& f, const SeriesCylLevySpec& spec,
                                      const TimeGrid& grid, const Functional& theta,
                                      std::size_t samples, const SimulationOptions& options,
                                      StreamPurpose purpose = StreamPurpose::Integral);

/// The same Riemann sums on several grids driven by one set of increments on
/// the finest grid: coarse increments are sums of fine ones. Every step count
/// must divide the largest. Returns one sample vector per entry of `steps`;
/// the finest level matches simulate_integral on that grid.
std::vector<std::vector<double>> simulate_integral_ladder(
    const DiagonalIntegrand& f, const SeriesCylLevySpec& spec, const std::vector<std::size_t>& steps,
    const Functional& theta, std::size_t samples, const SimulationOptions& options,
    StreamPurpose purpose = StreamPurpose::Integral);

/// X(t) = T(t) v0 + int_0^t T(t - s) dL(s) with T*(t) e_k = exp(gamma_k t) e_k.
struct OUSpec {
  ModeSequence eigenvalues;
  std::vector<double> initial;  // v0 coordinates; missing entries are 0
  SeriesCylLevySpec noise;
  TimeGrid grid;
};

void validate(const OUSpec& spec);

/// Mode-wise exact propagation X(t_j) = exp(gamma t_j) v0 + N_j with
/// N_{j+1} = exp(gamma dt) (N_j + sigma dl_j).
PathEnsemble simulate_ou(const OUSpec& spec, std::size_t samples, const SimulationOptions& options,
                         std::size_t record_every = 1);

struct TimeReversalReport {
  std::vector<CFEstimate> forward;
  std::vector<CFEstimate> reversed;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  /// max over the grid of |integral_cf(f) - integral_cf(f(T - .))|.
  double analytic_difference = 0.0;
};

/// Simulates int f dL and int f(T - .) dL with independent streams and
/// compares their empirical CFs at theta scaled by each multiplier. Passes iff
/// every component differs by at most 2 * 4/sqrt(M) + allowance.
TimeReversalReport time_reversal_check(const DiagonalIntegrand& f, const SeriesCylLevySpec& spec,
                                       const TimeGrid& grid, const Functional& theta,
                                       const std::vector<double>& multipliers,
                                       std::size_t samples, const SimulationOptions& options,
                                       double allowance);

}  // namespace cylev
