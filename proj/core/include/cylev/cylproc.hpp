#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cylev/levy1d.hpp"
#include "cylev/rng.hpp"
#include "cylev/sequence.hpp"

namespace cylev {

/// u* = sum_k theta_k e_k, stored by its first coefficients.
struct Functional {
  std::vector<double> coefficients;

  std::size_t size() const { return coefficients.size(); }
  double operator[](std::size_t k) const {  // 1-based, zero past the end
    return k >= 1 && k <= coefficients.size() ? coefficients[k - 1] : 0.0;
  }
  static Functional unit(std::size_t k, double value = 1.0);
  Functional scaled(double factor) const;
};

/// L(t)u* = sum_k <e_k, u*> sigma_k l_k(t) with l_k i.i.d. copies of `driver`.
struct SeriesCylLevySpec {
  ModeSequence scaling;
  DriverSpec driver;

  std::size_t truncation() const { return scaling.truncation(); }
};

void validate(const SeriesCylLevySpec& spec);

/// Triplet of sigma_k * l for mode k (1-based).
LevyTriplet1D mode_triplet(const SeriesCylLevySpec& spec, std::size_t k);

/// Convergence of the series for every l^2 test sequence (scalar actions).
VerdictReport check_weak_convergence(const SeriesCylLevySpec& spec);
/// Convergence of the series in the Hilbert space itself. Throws
/// UnsupportedCriterion for subordinator drivers.
VerdictReport check_strong_convergence(const SeriesCylLevySpec& spec);

/// Psi(theta) = sum_k psi(sigma_k theta_k) over the coefficients of theta.
std::complex<double> cylindrical_symbol(const SeriesCylLevySpec& spec, const Functional& theta);

/// M draws of L(t)theta.
std::vector<double> sample_action(const SeriesCylLevySpec& spec, const Functional& theta, double t,
                                  std::size_t samples, const SimulationOptions& options);

/// W(l(t)) for a Wiener process with diagonal covariance and an independent
/// subordinator l.
struct SubordinatedWienerSpec {
  ModeSequence covariance;
  DriverSpec subordinator;

  std::size_t truncation() const { return covariance.truncation(); }
};

void validate(const SubordinatedWienerSpec& spec);

/// exp(-t tau(<C theta, theta> / 2)).
double subordinated_cf(const SubordinatedWienerSpec& spec, const Functional& theta, double t);

std::vector<double> sample_subordinated(const SubordinatedWienerSpec& spec, const Functional& theta,
                                        double t, std::size_t samples,
                                        const SimulationOptions& options);

/// M paths on `recorded` grid nodes, values per mode. Layout [path][node][mode].
struct PathEnsemble {
  std::size_t paths = 0;
  std::size_t modes = 0;
  std::vector<std::size_t> nodes;  // grid indices of the recorded nodes
  std::vector<double> times;
  std::vector<double> data;
  std::uint64_t seed = 0;
  std::string scheme;

  std::size_t recorded() const { return nodes.size(); }
  double at(std::size_t path, std::size_t node, std::size_t mode) const {
    return data[(path * nodes.size() + node) * modes + mode];
  }
  double& at(std::size_t path, std::size_t node, std::size_t mode) {
    return data[(path * nodes.size() + node) * modes + mode];
  }
  /// <X(path, node), theta>.
  double action(std::size_t path, std::size_t node, const Functional& theta) const;
  /// Actions of all paths at one recorded node.
  std::vector<double> actions(std::size_t node, const Functional& theta) const;
};

/// Grid indices 0, r, 2r, ... plus the last node.
std::vector<std::size_t> recorded_nodes(std::size_t steps, std::size_t record_every);

/// Mode coordinates sigma_k l_k(t_j) of the truncated series.
PathEnsemble simulate_series_paths(const SeriesCylLevySpec& spec, const TimeGrid& grid,
                                   std::size_t samples, const SimulationOptions& options,
                                   std::size_t record_every = 1);

/// Mode coordinates of W(l(t_j)).
PathEnsemble simulate_subordinated_paths(const SubordinatedWienerSpec& spec, const TimeGrid& grid,
                                         std::size_t samples, const SimulationOptions& options,
                                         std::size_t record_every = 1);

}  // namespace cylev
