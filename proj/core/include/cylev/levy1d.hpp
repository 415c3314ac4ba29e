#pragma once

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

#include "cylev/rng.hpp"

namespace cylev {

// ---------------------------------------------------------------------------
// Levy measures on the real line. A closed parametric family: every measure
// used by the library has closed-form truncated moments and symbols.
// ---------------------------------------------------------------------------

/// The zero measure.
struct NoJumps {};

/// Symmetric alpha-stable measure with density (scale^alpha / 2) |b|^(-1-alpha).
struct SymmetricStableMeasure {
  double alpha = 1.0;
  double scale = 1.0;
};

struct Atom {
  double intensity = 1.0;
  double jump = 1.0;
};

/// intensity * delta_jump.
struct PoissonAtomMeasure {
  Atom atom;
};

/// sum_i intensity_i * delta_{jump_i}.
struct FiniteAtomsMeasure {
  std::vector<Atom> atoms;
};

/// One-sided stable measure on (0, inf) with density
/// scale * index / Gamma(1 - index) * s^(-1-index), so that its Laplace
/// exponent is scale * beta^index.
struct StableSubordinatorMeasure {
  double index = 0.5;
  double scale = 1.0;
};

using LevyMeasure1D = std::variant<NoJumps, SymmetricStableMeasure, PoissonAtomMeasure,
                                   FiniteAtomsMeasure, StableSubordinatorMeasure>;

/// Throws std::invalid_argument when parameters are outside their domain.
/// Stable indices within 1e-6 of 0 or 2 are rejected.
void validate(const LevyMeasure1D& measure);

bool is_symmetric(const LevyMeasure1D& measure);
/// Supported on (0, inf) with integral of min(s, 1) finite.
bool is_one_sided(const LevyMeasure1D& measure);
/// Finite total mass (atomic measures and the zero measure).
bool is_finite(const LevyMeasure1D& measure);
/// Total mass; infinite for stable measures.
double total_mass(const LevyMeasure1D& measure);

/// Characteristics (b, r, nu) with truncation function 1_{|beta| <= 1}.
struct LevyTriplet1D {
  double drift = 0.0;
  double gaussian_variance = 0.0;
  LevyMeasure1D jumps = NoJumps{};
};

void validate(const LevyTriplet1D& triplet);

// ---------------------------------------------------------------------------
// Named driver processes.
// ---------------------------------------------------------------------------

struct BrownianDriver {
  double sigma = 1.0;
};
struct PoissonDriver {
  double intensity = 1.0;
  double jump = 1.0;
};
struct CompensatedPoissonDriver {
  double intensity = 1.0;
  double jump = 1.0;
};
struct SymmetricStableDriver {
  double alpha = 1.0;
  double scale = 1.0;
};
/// Laplace transform E exp(-beta l(t)) = exp(-t scale beta^index).
struct StableSubordinatorDriver {
  double index = 0.5;
  double scale = 1.0;
};
/// Subordinator with characteristics (drift, 0, jumps); `jumps` must be one-sided.
struct DriftedSubordinatorDriver {
  double drift = 0.0;
  LevyMeasure1D jumps = NoJumps{};
};

using DriverSpec = std::variant<BrownianDriver, PoissonDriver, CompensatedPoissonDriver,
                                SymmetricStableDriver, StableSubordinatorDriver,
                                DriftedSubordinatorDriver>;

void validate(const DriverSpec& driver);
LevyTriplet1D triplet_of(const DriverSpec& driver);
bool is_subordinator(const DriverSpec& driver);
/// Law symmetric about zero (Brownian and symmetric stable drivers).
bool is_symmetric(const DriverSpec& driver);
const char* family_name(const DriverSpec& driver);

// ---------------------------------------------------------------------------
// Symbols and measure integrals.
// ---------------------------------------------------------------------------

/// Constant K with int (cos(b) - 1) |b|^(-1-alpha) db / 2 = -K, i.e. the
/// symbol of SymmetricStableMeasure{alpha, 1} at theta = 1 is -K.
double stable_symbol_constant(double alpha);

/// Levy-Khintchine exponent psi(theta) of the triplet, in closed form.
std::complex<double> symbol_1d(const LevyTriplet1D& triplet, double theta);

/// Same exponent with the jump integral evaluated by adaptive quadrature:
/// split at |beta| = 1, oscillatory tail accelerated. Throws NumericError if
/// the tolerance is not met.
std::complex<double> symbol_1d_quadrature(const LevyTriplet1D& triplet, double theta);

/// int (e^{i u b} - 1 - i u b 1_{|u b| <= 1}) nu(db): the jump part of the
/// symbol of the rescaled process u * l, with truncation applied after scaling.
std::complex<double> rescaled_jump_symbol(const LevyMeasure1D& measure, double u);

/// int (|c b|^2 ^ 1) nu(db).
double truncated_second_moment_integral(const LevyMeasure1D& measure, double c);
/// Quadrature route of the same integral, split at the kink |b| = 1/|c|.
double truncated_second_moment_quadrature(const LevyMeasure1D& measure, double c);
/// int (|c b|^p ^ 1) nu(db), p > 0.
double truncated_moment_integral(const LevyMeasure1D& measure, double c, double p);
/// int_{|c b| <= 1} (c b)^2 nu(db).
double small_jump_second_moment(const LevyMeasure1D& measure, double c);

/// Drift b' of factor * l given the triplet of l (truncation 1_{|b|<=1} on
/// both sides).
double drift_rescale(const LevyTriplet1D& triplet, double factor);

/// Triplet of factor * l. Negative factors are not supported for one-sided
/// stable measures (the image is not in the parametric family).
LevyTriplet1D scale_triplet(const LevyTriplet1D& triplet, double factor);

/// tau(beta) = drift * beta + int (1 - e^{-beta s}) rho(ds) for subordinators.
/// Throws std::invalid_argument for non-subordinators or beta < 0.
double laplace_exponent(const DriverSpec& subordinator, double beta);

// ---------------------------------------------------------------------------
// Sampling.
// ---------------------------------------------------------------------------

class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps);

  double horizon() const { return horizon_; }
  std::size_t steps() const { return steps_; }
  /// Step length; zero for the degenerate grid without steps.
  double step() const { return steps_ == 0 ? 0.0 : horizon_ / static_cast<double>(steps_); }
  /// t_j = j * T / n, computed so that shared nodes of refined grids agree bitwise.
  double node(std::size_t j) const {
    return static_cast<double>(j) * horizon_ / static_cast<double>(steps_);
  }

 private:
  double horizon_;
  std::size_t steps_;
};

/// Draws increments l(t + dt) - l(t) with the exact law. Constants depending
/// on the driver and dt are computed once at construction.
class IncrementSampler {
 public:
  IncrementSampler(const DriverSpec& driver, double dt);

  double operator()(RandomStream& stream) const;
  double dt() const { return dt_; }

 private:
  enum class Kind { Gaussian, Atoms, SymmetricStable, PositiveStable };
  struct Part {
    Kind kind;
    double a = 0.0;  // gaussian sd, atom mean count, stable index
    double b = 0.0;  // atom jump, stable scale factor
  };
  double deterministic_ = 0.0;
  double dt_;
  std::vector<Part> parts_;
};

/// Symmetric alpha-stable variate with characteristic function exp(-|theta|^alpha)
/// (Chambers-Mallows-Stuck).
double sample_standard_symmetric_stable(double alpha, RandomStream& stream);
/// Positive stable variate with Laplace transform exp(-beta^index), index in (0,1)
/// (Kanter's representation of the same transform).
double sample_standard_positive_stable(double index, RandomStream& stream);

/// grid.steps() i.i.d. increments of the driver over steps of length grid.step().
std::vector<double> sample_increments(const DriverSpec& driver, const TimeGrid& grid,
                                      RandomStream& stream);

}  // namespace cylev
