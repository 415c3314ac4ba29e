#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <vector>

#include "cylev/cylproc.hpp"
#include "cylev/levy1d.hpp"
#include "cylev/sequence.hpp"

namespace cylev {

/// Diagonal integrand f with f*(s) e_k = g_k(s) e_k on [0, T].
class DiagonalIntegrand {
 public:
  enum class Kind {
    SemigroupForward,      // g_k(s) = exp(gamma_k s)
    SemigroupConvolution,  // g_k(s) = exp(gamma_k (T - s))
    Constant,              // g_k(s) = c_k
    Step,                  // g_k piecewise constant on [breaks_i, breaks_{i+1})
  };

  static DiagonalIntegrand semigroup_forward(ModeSequence gamma, double horizon);
  static DiagonalIntegrand semigroup_convolution(ModeSequence gamma, double horizon);
  static DiagonalIntegrand constant(ModeSequence values, double horizon);
  /// `breaks` are the interior cell boundaries (sorted, inside (0, T));
  /// `cells[k-1]` holds the breaks.size() + 1 values of mode k.
  static DiagonalIntegrand step(std::vector<double> breaks, std::vector<std::vector<double>> cells,
                                double horizon);

  Kind kind() const { return kind_; }
  double horizon() const { return horizon_; }
  std::size_t truncation() const;
  /// Eigenvalue or constant sequence; throws for step kernels.
  const ModeSequence& sequence() const;
  const std::vector<double>& breaks() const { return breaks_; }

  /// g_k(s), 1-based k.
  double value(std::size_t k, double s) const;
  /// s -> g_k(T - s).
  DiagonalIntegrand reversed() const;
  /// int_a^b |g_k(s)|^q ds in closed form.
  double power_integral(std::size_t k, double q, double a, double b) const;
  /// Asymptotic class of int_0^T |g_k(s)|^q ds in k.
  Asymptote power_integral_asymptote(double q) const;
  /// Asymptotic class of sup_s |g_k(s)|.
  Asymptote sup_asymptote() const;

 private:
  DiagonalIntegrand(Kind kind, double horizon) : kind_(kind), horizon_(horizon) {}

  Kind kind_;
  double horizon_;
  std::vector<ModeSequence> sequence_;  // empty for step kernels
  std::vector<double> breaks_;
  std::vector<std::vector<double>> cells_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Finite union of disjoint intervals. An empty vector is the empty set.
using TimeSet = std::vector<Interval>;

/// Checks containment in [0, T] and pairwise disjointness; returns the set sorted.
TimeSet normalized(const TimeSet& set, double horizon);

/// int_A Psi(f*(s) theta) ds.
std::complex<double> integral_log_cf(const DiagonalIntegrand& f, const SeriesCylLevySpec& spec,
                                     const TimeSet& set, const Functional& theta);
/// exp(int_A Psi(f*(s) theta) ds).
std::complex<double> integral_cf(const DiagonalIntegrand& f, const SeriesCylLevySpec& spec,
                                 const TimeSet& set, const Functional& theta);

/// Characteristics of the real random variable <Z_A, theta>, truncation 1_{|x|<=1}.
struct IntegralCharacteristics {
  double drift = 0.0;
  double variance = 0.0;
  /// int_A int (e^{iu} - 1 - iu 1_{|u|<=1}) image measure, the jump part of the exponent.
  std::complex<double> jump_symbol = 0.0;
  /// c -> int_A sum_k int (|c g_k(s) theta_k beta|^2 ^ 1) nu_k(d beta) ds.
  std::map<double, double> levy_functionals;

  std::complex<double> log_cf() const {
    return std::complex<double>(0.0, drift) - 0.5 * variance + jump_symbol;
  }
};

IntegralCharacteristics integral_characteristics(const DiagonalIntegrand& f,
                                                 const SeriesCylLevySpec& spec, const TimeSet& set,
                                                 const Functional& theta,
                                                 const std::vector<double>& test_scales = {1.0});

/// sum_k q_k int_0^T g_k(s)^2 ds.
VerdictReport hilbert_trace_condition(const DiagonalIntegrand& f, const ModeSequence& q);

/// I_k = int_0^T int (g_k(s)^2 beta^2 ^ 1) nu_k(d beta) ds, closed form where
/// available and quadrature for atomic measures.
double levy_mode_integral(const DiagonalIntegrand& f, const SeriesCylLevySpec& spec, std::size_t k);
/// Same integral by nested quadrature.
double levy_mode_integral_quadrature(const DiagonalIntegrand& f, const SeriesCylLevySpec& spec,
                                     std::size_t k);
/// Summability of I_k.
VerdictReport hilbert_levy_condition(const DiagonalIntegrand& f, const SeriesCylLevySpec& spec);

/// sum_k |sigma_k|^alpha / |gamma_k| for gamma_k < 0, gamma_k -> -infinity.
VerdictReport ou_stable_criterion(const ModeSequence& sigma, const ModeSequence& gamma,
                                  double alpha);

struct SequenceSpaceReport {
  VerdictReport covariance;        // sum_k (q_k int g_k^2)^{p/2}
  VerdictReport small_jumps;       // sum_k (int int_{|g beta|<=1} (g beta)^2 nu_k ds)^{p/2}
  VerdictReport moment;            // sum_k int int (|g beta|^p ^ 1) nu_k ds
};

SequenceSpaceReport sequence_space_conditions(const DiagonalIntegrand& f, const ModeSequence& q,
                                              const SeriesCylLevySpec& spec, double p);

/// h(s) = sum_{k<=N} q_k exp(2 gamma_k s).
double semigroup_hs_norm_squared(const ModeSequence& q, const ModeSequence& gamma, double s);

/// int_0^T int (r h(s) ^ 1) rho(dr) ds for the Levy measure rho of `subordinator`.
VerdictReport subordinated_semigroup_criterion(const ModeSequence& q, const ModeSequence& gamma,
                                               const DriverSpec& subordinator, double horizon);

}  // namespace cylev
