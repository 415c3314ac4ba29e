#include "cylev/levy1d.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "cylev/errors.hpp"
#include "cylev/quadrature.hpp"

#include "overloaded.hpp"

namespace cylev {
namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

using detail::overloaded;

constexpr double kIndexGuard = 1e-6;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

bool in_unit_ball(double x) { return std::abs(x) <= 1.0; }

// 1 - cos(x) without cancellation.
double one_minus_cos(double x) {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

// e^{ix} - 1.
cplx expm1_i(double x) { return {-one_minus_cos(x), std::sin(x)}; }

// int_0^eps b^p db, p > -1.
double power_head(double p, double eps) { return std::pow(eps, p + 1.0) / (p + 1.0); }

// int_0^eps -(1 - cos(w b)) k b^(-1-a) db from 1 - cos x = x^2/2 - x^4/24 + O(x^6).
double cosine_head(double w, double k, double a, double eps) {
  return -k * (w * w * power_head(1.0 - a, eps) / 2.0 - std::pow(w, 4) * power_head(3.0 - a, eps) / 24.0);
}

// Density constant k of the one-sided stable measure: k s^{-1-index}.
double subordinator_density_constant(const StableSubordinatorMeasure& m) {
  return m.scale * m.index / std::tgamma(1.0 - m.index);
}

// -(-i theta)^index: jump exponent without truncation of the one-sided stable measure
// divided by scale.
cplx one_sided_stable_exponent(double index, double theta) {
  if (theta == 0.0) return {};
  const double mag = std::pow(std::abs(theta), index);
  const double phase = -0.5 * pi * index * (theta > 0.0 ? 1.0 : -1.0);
  return -mag * cplx(std::cos(phase), std::sin(phase));
}

std::vector<Atom> atoms_of(const LevyMeasure1D& m) {
  if (const auto* p = std::get_if<PoissonAtomMeasure>(&m)) return {p->atom};
  if (const auto* f = std::get_if<FiniteAtomsMeasure>(&m)) return f->atoms;
  return {};
}

}  // namespace

// ---------------------------------------------------------------------------
// Measures and triplets
// ---------------------------------------------------------------------------

void validate(const LevyMeasure1D& measure) {
  auto check_atom = [](const Atom& a) {
    require(std::isfinite(a.intensity) && a.intensity > 0.0, "atom intensity must be positive");
    require(std::isfinite(a.jump) && a.jump != 0.0, "atom jump must be finite and non-zero");
  };
  std::visit(overloaded{
                 [](const NoJumps&) {},
                 [](const SymmetricStableMeasure& m) {
                   require(m.alpha > kIndexGuard && m.alpha < 2.0 - kIndexGuard,
                           "stable index must lie in (0, 2) away from the endpoints");
                   require(std::isfinite(m.scale) && m.scale >= 0.0, "stable scale must be >= 0");
                 },
                 [&](const PoissonAtomMeasure& m) { check_atom(m.atom); },
                 [&](const FiniteAtomsMeasure& m) {
                   for (const auto& a : m.atoms) check_atom(a);
                 },
                 [](const StableSubordinatorMeasure& m) {
                   require(m.index > kIndexGuard && m.index < 1.0 - kIndexGuard,
                           "subordinator index must lie in (0, 1)");
                   require(std::isfinite(m.scale) && m.scale >= 0.0,
                           "subordinator scale must be >= 0");
                 },
             },
             measure);
}

bool is_symmetric(const LevyMeasure1D& measure) {
  return std::holds_alternative<NoJumps>(measure) ||
         std::holds_alternative<SymmetricStableMeasure>(measure);
}

bool is_one_sided(const LevyMeasure1D& measure) {
  if (std::holds_alternative<NoJumps>(measure)) return true;
  if (std::holds_alternative<StableSubordinatorMeasure>(measure)) return true;
  if (std::holds_alternative<SymmetricStableMeasure>(measure)) return false;
  for (const auto& a : atoms_of(measure))
    if (a.jump <= 0.0) return false;
  return true;
}

bool is_finite(const LevyMeasure1D& measure) { return std::isfinite(total_mass(measure)); }

double total_mass(const LevyMeasure1D& measure) {
  if (std::holds_alternative<SymmetricStableMeasure>(measure)) {
    return std::get<SymmetricStableMeasure>(measure).scale == 0.0
               ? 0.0
               : std::numeric_limits<double>::infinity();
  }
  if (std::holds_alternative<StableSubordinatorMeasure>(measure)) {
    return std::get<StableSubordinatorMeasure>(measure).scale == 0.0
               ? 0.0
               : std::numeric_limits<double>::infinity();
  }
  double mass = 0.0;
  for (const auto& a : atoms_of(measure)) mass += a.intensity;
  return mass;
}

void validate(const LevyTriplet1D& triplet) {
  require(std::isfinite(triplet.drift), "drift must be finite");
  require(std::isfinite(triplet.gaussian_variance) && triplet.gaussian_variance >= 0.0,
          "Gaussian variance must be >= 0");
  validate(triplet.jumps);
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

void validate(const DriverSpec& driver) {
  std::visit(overloaded{
                 [](const BrownianDriver& d) {
                   require(std::isfinite(d.sigma), "Brownian sigma must be finite");
                 },
                 [](const PoissonDriver& d) {
                   validate(LevyMeasure1D{PoissonAtomMeasure{{d.intensity, d.jump}}});
                 },
                 [](const CompensatedPoissonDriver& d) {
                   validate(LevyMeasure1D{PoissonAtomMeasure{{d.intensity, d.jump}}});
                 },
                 [](const SymmetricStableDriver& d) {
                   validate(LevyMeasure1D{SymmetricStableMeasure{d.alpha, d.scale}});
                 },
                 [](const StableSubordinatorDriver& d) {
                   validate(LevyMeasure1D{StableSubordinatorMeasure{d.index, d.scale}});
                 },
                 [](const DriftedSubordinatorDriver& d) {
                   require(std::isfinite(d.drift) && d.drift >= 0.0,
                           "subordinator drift must be >= 0");
                   validate(d.jumps);
                   require(is_one_sided(d.jumps), "subordinator jumps must be positive");
                 },
             },
             driver);
}

namespace {

// int_0^1 s nu(ds) for one-sided measures.
double small_jump_mean(const LevyMeasure1D& m) {
  if (const auto* s = std::get_if<StableSubordinatorMeasure>(&m))
    return s->scale * s->index / std::tgamma(2.0 - s->index);
  double sum = 0.0;
  for (const auto& a : atoms_of(m))
    if (in_unit_ball(a.jump)) sum += a.intensity * a.jump;
  return sum;
}

}  // namespace

LevyTriplet1D triplet_of(const DriverSpec& driver) {
  validate(driver);
  return std::visit(
      overloaded{
          [](const BrownianDriver& d) { return LevyTriplet1D{0.0, d.sigma * d.sigma, NoJumps{}}; },
          [](const PoissonDriver& d) {
            const double b = in_unit_ball(d.jump) ? d.intensity * d.jump : 0.0;
            return LevyTriplet1D{b, 0.0, PoissonAtomMeasure{{d.intensity, d.jump}}};
          },
          [](const CompensatedPoissonDriver& d) {
            const double b = in_unit_ball(d.jump) ? 0.0 : -d.intensity * d.jump;
            return LevyTriplet1D{b, 0.0, PoissonAtomMeasure{{d.intensity, d.jump}}};
          },
          [](const SymmetricStableDriver& d) {
            return LevyTriplet1D{0.0, 0.0, SymmetricStableMeasure{d.alpha, d.scale}};
          },
          [](const StableSubordinatorDriver& d) {
            LevyMeasure1D m = StableSubordinatorMeasure{d.index, d.scale};
            return LevyTriplet1D{small_jump_mean(m), 0.0, m};
          },
          [](const DriftedSubordinatorDriver& d) {
            return LevyTriplet1D{d.drift + small_jump_mean(d.jumps), 0.0, d.jumps};
          },
      },
      driver);
}

bool is_subordinator(const DriverSpec& driver) {
  return std::holds_alternative<StableSubordinatorDriver>(driver) ||
         std::holds_alternative<DriftedSubordinatorDriver>(driver);
}

bool is_symmetric(const DriverSpec& driver) {
  return std::holds_alternative<BrownianDriver>(driver) ||
         std::holds_alternative<SymmetricStableDriver>(driver);
}

const char* family_name(const DriverSpec& driver) {
  return std::visit(overloaded{
                        [](const BrownianDriver&) { return "brownian"; },
                        [](const PoissonDriver&) { return "poisson"; },
                        [](const CompensatedPoissonDriver&) { return "compensated_poisson"; },
                        [](const SymmetricStableDriver&) { return "symmetric_stable"; },
                        [](const StableSubordinatorDriver&) { return "stable_subordinator"; },
                        [](const DriftedSubordinatorDriver&) { return "drifted_subordinator"; },
                    },
                    driver);
}

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

double stable_symbol_constant(double alpha) {
  require(alpha > 0.0 && alpha < 2.0, "stable index must lie in (0, 2)");
  if (alpha == 1.0) return 0.5 * pi;
  return std::tgamma(1.0 - alpha) * std::cos(0.5 * pi * alpha) / alpha;
}

std::complex<double> rescaled_jump_symbol(const LevyMeasure1D& measure, double u) {
  if (u == 0.0) return {};
  return std::visit(
      overloaded{
          [](const NoJumps&) { return cplx{}; },
          [&](const SymmetricStableMeasure& m) {
            return cplx(-std::pow(m.scale * std::abs(u), m.alpha) * stable_symbol_constant(m.alpha),
                        0.0);
          },
          [&](const StableSubordinatorMeasure& m) {
            const double k = subordinator_density_constant(m);
            const double compensator = k * std::pow(std::abs(u), m.index - 1.0) / (1.0 - m.index);
            return m.scale * one_sided_stable_exponent(m.index, u) - cplx(0.0, u * compensator);
          },
          [&](const auto& atomic) {
            cplx sum{};
            for (const auto& a : atoms_of(LevyMeasure1D{atomic})) {
              const double x = u * a.jump;
              sum += a.intensity * (expm1_i(x) - cplx(0.0, in_unit_ball(x) ? x : 0.0));
            }
            return sum;
          },
      },
      measure);
}

std::complex<double> symbol_1d(const LevyTriplet1D& triplet, double theta) {
  const cplx continuous(-0.5 * triplet.gaussian_variance * theta * theta, triplet.drift * theta);
  if (theta == 0.0) return {};
  const cplx jumps = std::visit(
      overloaded{
          [&](const StableSubordinatorMeasure& m) {
            const double b_small = m.scale * m.index / std::tgamma(2.0 - m.index);
            return m.scale * one_sided_stable_exponent(m.index, theta) - cplx(0.0, theta * b_small);
          },
          [&](const auto& other) {
            // For symmetric and atomic measures the truncation at |b| <= 1 before
            // scaling equals the rescaled form at u = theta with jumps unscaled.
            cplx sum{};
            if constexpr (std::is_same_v<std::decay_t<decltype(other)>, SymmetricStableMeasure>) {
              sum = rescaled_jump_symbol(LevyMeasure1D{other}, theta);
            } else {
              for (const auto& a : atoms_of(LevyMeasure1D{other})) {
                const double x = theta * a.jump;
                sum += a.intensity * (expm1_i(x) - cplx(0.0, in_unit_ball(a.jump) ? x : 0.0));
              }
            }
            return sum;
          },
      },
      triplet.jumps);
  return continuous + jumps;
}

std::complex<double> symbol_1d_quadrature(const LevyTriplet1D& triplet, double theta) {
  if (theta == 0.0) return {};
  const cplx continuous(-0.5 * triplet.gaussian_variance * theta * theta, triplet.drift * theta);
  const double w = std::abs(theta);
  const double sgn = theta > 0.0 ? 1.0 : -1.0;
  // Zeros of cos(w b) and sin(w b) after b = 1.
  const double half_period = pi / w;
  const double cos_zero = (std::ceil(w / pi - 0.5) + 0.5) * half_period;
  const double sin_zero = std::ceil(w / pi) * half_period;
  // Below eps the integrands are replaced by their Taylor polynomials, so the
  // quadrature never samples the density's singularity at 0.
  const double eps = 1e-4 / std::max(w, 1.0);

  const cplx jumps = std::visit(
      overloaded{
          [](const NoJumps&) { return cplx{}; },
          [&](const SymmetricStableMeasure& m) {
            if (m.scale == 0.0) return cplx{};
            const double c = 0.5 * std::pow(m.scale, m.alpha);
            auto density = [&](double b) { return c * std::pow(b, -1.0 - m.alpha); };
            const double inner =
                cosine_head(w, c, m.alpha, eps) +
                quad::integrate([&](double b) { return -one_minus_cos(w * b) * density(b); }, eps, 1.0)
                    .value;
            const auto tail_cos = quad::integrate_oscillatory_tail(
                [&](double b) { return std::cos(w * b) * density(b); }, 1.0, cos_zero, half_period);
            const auto tail_mass = quad::integrate_to_infinity(density, 1.0);
            return cplx(2.0 * (inner + tail_cos.value - tail_mass.value), 0.0);
          },
          [&](const StableSubordinatorMeasure& m) {
            if (m.scale == 0.0) return cplx{};
            const double k = subordinator_density_constant(m);
            auto density = [&](double s) { return k * std::pow(s, -1.0 - m.index); };
            const double re_inner =
                cosine_head(w, k, m.index, eps) +
                quad::integrate([&](double s) { return -one_minus_cos(w * s) * density(s); }, eps, 1.0)
                    .value;
            const auto re_tail_cos = quad::integrate_oscillatory_tail(
                [&](double s) { return std::cos(w * s) * density(s); }, 1.0, cos_zero, half_period);
            const auto re_tail_mass = quad::integrate_to_infinity(density, 1.0);
            // sin x - x = -x^3/6 + x^5/120 - ... on the head.
            const double im_head = k * (-std::pow(w, 3) * power_head(2.0 - m.index, eps) / 6.0 +
                                        std::pow(w, 5) * power_head(4.0 - m.index, eps) / 120.0);
            const double im_inner =
                im_head + quad::integrate([&](double s) { return (std::sin(w * s) - w * s) * density(s); },
                                          eps, 1.0)
                              .value;
            const auto im_tail = quad::integrate_oscillatory_tail(
                [&](double s) { return std::sin(w * s) * density(s); }, 1.0, sin_zero, half_period);
            return cplx(re_inner + re_tail_cos.value - re_tail_mass.value,
                        sgn * (im_inner + im_tail.value));
          },
          [&](const auto& atomic) {
            cplx sum{};
            for (const auto& a : atoms_of(LevyMeasure1D{atomic})) {
              const double x = theta * a.jump;
              sum += a.intensity *
                     cplx(std::cos(x) - 1.0, std::sin(x) - (in_unit_ball(a.jump) ? x : 0.0));
            }
            return sum;
          },
      },
      triplet.jumps);
  return continuous + jumps;
}

// ---------------------------------------------------------------------------
// Measure integrals
// ---------------------------------------------------------------------------

double truncated_moment_integral(const LevyMeasure1D& measure, double c, double p) {
  require(p > 0.0, "moment order must be positive");
  if (c == 0.0) return 0.0;
  const double ac = std::abs(c);
  return std::visit(
      overloaded{
          [](const NoJumps&) { return 0.0; },
          [&](const SymmetricStableMeasure& m) {
            if (m.scale == 0.0) return 0.0;
            if (p <= m.alpha) return std::numeric_limits<double>::infinity();
            return std::pow(ac * m.scale, m.alpha) * p / (m.alpha * (p - m.alpha));
          },
          [&](const StableSubordinatorMeasure& m) {
            if (m.scale == 0.0) return 0.0;
            if (p <= m.index) return std::numeric_limits<double>::infinity();
            return subordinator_density_constant(m) * std::pow(ac, m.index) * p /
                   (m.index * (p - m.index));
          },
          [&](const auto& atomic) {
            double sum = 0.0;
            for (const auto& a : atoms_of(LevyMeasure1D{atomic}))
              sum += a.intensity * std::min(std::pow(std::abs(c * a.jump), p), 1.0);
            return sum;
          },
      },
      measure);
}

double truncated_second_moment_integral(const LevyMeasure1D& measure, double c) {
  if (c == 0.0) return 0.0;
  return std::visit(
      overloaded{
          [&](const SymmetricStableMeasure& m) {
            return 2.0 * std::pow(std::abs(c) * m.scale, m.alpha) / (m.alpha * (2.0 - m.alpha));
          },
          [&](const auto&) { return truncated_moment_integral(measure, c, 2.0); },
      },
      measure);
}

double truncated_second_moment_quadrature(const LevyMeasure1D& measure, double c) {
  if (c == 0.0) return 0.0;
  const double kink = 1.0 / std::abs(c);
  const double c2 = c * c;
  // density(b) = k b^(-1-a); [0, eps] is done in closed form.
  auto split = [&](double k, double a) {
    auto density = [&](double b) { return k * std::pow(b, -1.0 - a); };
    const double eps = 1e-6 * kink;
    const auto inner = quad::integrate([&](double b) { return c2 * b * b * density(b); }, eps, kink);
    const auto outer = quad::integrate_to_infinity(density, kink);
    return c2 * k * power_head(1.0 - a, eps) + inner.value + outer.value;
  };
  return std::visit(
      overloaded{
          [](const NoJumps&) { return 0.0; },
          [&](const SymmetricStableMeasure& m) {
            if (m.scale == 0.0) return 0.0;
            return 2.0 * split(0.5 * std::pow(m.scale, m.alpha), m.alpha);
          },
          [&](const StableSubordinatorMeasure& m) {
            if (m.scale == 0.0) return 0.0;
            return split(subordinator_density_constant(m), m.index);
          },
          [&](const auto& atomic) {
            double sum = 0.0;
            for (const auto& a : atoms_of(LevyMeasure1D{atomic})) {
              const double x = c * a.jump;
              sum += a.intensity * std::min(x * x, 1.0);
            }
            return sum;
          },
      },
      measure);
}

double small_jump_second_moment(const LevyMeasure1D& measure, double c) {
  if (c == 0.0) return 0.0;
  const double ac = std::abs(c);
  return std::visit(
      overloaded{
          [](const NoJumps&) { return 0.0; },
          [&](const SymmetricStableMeasure& m) {
            return std::pow(ac * m.scale, m.alpha) / (2.0 - m.alpha);
          },
          [&](const StableSubordinatorMeasure& m) {
            return subordinator_density_constant(m) * std::pow(ac, m.index) / (2.0 - m.index);
          },
          [&](const auto& atomic) {
            double sum = 0.0;
            for (const auto& a : atoms_of(LevyMeasure1D{atomic})) {
              const double x = c * a.jump;
              if (in_unit_ball(x)) sum += a.intensity * x * x;
            }
            return sum;
          },
      },
      measure);
}

double drift_rescale(const LevyTriplet1D& triplet, double factor) {
  if (factor == 0.0) return 0.0;
  const double base = factor * triplet.drift;
  return std::visit(
      overloaded{
          [&](const NoJumps&) { return base; },
          [&](const SymmetricStableMeasure&) { return base; },
          [&](const StableSubordinatorMeasure& m) {
            const double k = subordinator_density_constant(m);
            return base + factor * k * (std::pow(std::abs(factor), m.index - 1.0) - 1.0) /
                              (1.0 - m.index);
          },
          [&](const auto& atomic) {
            double correction = 0.0;
            for (const auto& a : atoms_of(LevyMeasure1D{atomic})) {
              const double inside_after = in_unit_ball(factor * a.jump) ? 1.0 : 0.0;
              const double inside_before = in_unit_ball(a.jump) ? 1.0 : 0.0;
              correction += a.intensity * a.jump * (inside_after - inside_before);
            }
            return base + factor * correction;
          },
      },
      triplet.jumps);
}

LevyTriplet1D scale_triplet(const LevyTriplet1D& triplet, double factor) {
  LevyTriplet1D out;
  out.drift = drift_rescale(triplet, factor);
  out.gaussian_variance = factor * factor * triplet.gaussian_variance;
  if (factor == 0.0) return out;
  out.jumps = std::visit(
      overloaded{
          [](const NoJumps&) -> LevyMeasure1D { return NoJumps{}; },
          [&](const SymmetricStableMeasure& m) -> LevyMeasure1D {
            return SymmetricStableMeasure{m.alpha, m.scale * std::abs(factor)};
          },
          [&](const StableSubordinatorMeasure& m) -> LevyMeasure1D {
            require(factor > 0.0, "one-sided stable measure cannot be reflected");
            return StableSubordinatorMeasure{m.index, m.scale * std::pow(factor, m.index)};
          },
          [&](const auto& atomic) -> LevyMeasure1D {
            FiniteAtomsMeasure scaled;
            for (const auto& a : atoms_of(LevyMeasure1D{atomic}))
              scaled.atoms.push_back({a.intensity, a.jump * factor});
            if (scaled.atoms.size() == 1) return PoissonAtomMeasure{scaled.atoms.front()};
            return scaled;
          },
      },
      triplet.jumps);
  return out;
}

double laplace_exponent(const DriverSpec& subordinator, double beta) {
  require(is_subordinator(subordinator), "Laplace exponent needs a subordinator");
  require(std::isfinite(beta) && beta >= 0.0, "Laplace exponent argument must be >= 0");
  validate(subordinator);
  auto jump_part = [&](const LevyMeasure1D& m) {
    return std::visit(overloaded{
                          [](const NoJumps&) { return 0.0; },
                          [&](const StableSubordinatorMeasure& s) {
                            return s.scale * std::pow(beta, s.index);
                          },
                          [](const SymmetricStableMeasure&) -> double {
                            throw std::invalid_argument("symmetric measure in subordinator");
                          },
                          [&](const auto& atomic) {
                            double sum = 0.0;
                            for (const auto& a : atoms_of(LevyMeasure1D{atomic}))
                              sum += -a.intensity * std::expm1(-beta * a.jump);
                            return sum;
                          },
                      },
                      m);
  };
  if (const auto* s = std::get_if<StableSubordinatorDriver>(&subordinator))
    return s->scale * std::pow(beta, s->index);
  const auto& d = std::get<DriftedSubordinatorDriver>(subordinator);
  return d.drift * beta + jump_part(d.jumps);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  require(std::isfinite(horizon) && horizon > 0.0, "time horizon must be positive");
}

double sample_standard_symmetric_stable(double alpha, RandomStream& stream) {
  const double v = pi * (stream.uniform_open() - 0.5);
  if (alpha == 1.0) return std::tan(v);
  const double w = stream.exponential();
  const double cos_v = std::cos(v);
  return std::sin(alpha * v) / std::pow(cos_v, 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

double sample_standard_positive_stable(double index, RandomStream& stream) {
  const double u = pi * stream.uniform_open();
  const double w = stream.exponential();
  return std::sin(index * u) / std::pow(std::sin(u), 1.0 / index) *
         std::pow(std::sin((1.0 - index) * u) / w, (1.0 - index) / index);
}

IncrementSampler::IncrementSampler(const DriverSpec& driver, double dt) : dt_(dt) {
  validate(driver);
  require(std::isfinite(dt) && dt >= 0.0, "time step must be >= 0");
  auto add_jumps = [&](const LevyMeasure1D& m) {
    std::visit(overloaded{
                   [](const NoJumps&) {},
                   [&](const SymmetricStableMeasure& s) {
                     const double f =
                         s.scale * std::pow(dt * stable_symbol_constant(s.alpha), 1.0 / s.alpha);
                     parts_.push_back({Kind::SymmetricStable, s.alpha, f});
                   },
                   [&](const StableSubordinatorMeasure& s) {
                     parts_.push_back({Kind::PositiveStable, s.index,
                                       std::pow(dt * s.scale, 1.0 / s.index)});
                   },
                   [&](const auto& atomic) {
                     for (const auto& a : atoms_of(LevyMeasure1D{atomic}))
                       parts_.push_back({Kind::Atoms, a.intensity * dt, a.jump});
                   },
               },
               m);
  };
  std::visit(overloaded{
                 [&](const BrownianDriver& d) {
                   parts_.push_back({Kind::Gaussian, std::abs(d.sigma) * std::sqrt(dt), 0.0});
                 },
                 [&](const PoissonDriver& d) {
                   parts_.push_back({Kind::Atoms, d.intensity * dt, d.jump});
                 },
                 [&](const CompensatedPoissonDriver& d) {
                   parts_.push_back({Kind::Atoms, d.intensity * dt, d.jump});
                   deterministic_ = -d.intensity * d.jump * dt;
                 },
                 [&](const SymmetricStableDriver& d) {
                   add_jumps(SymmetricStableMeasure{d.alpha, d.scale});
                 },
                 [&](const StableSubordinatorDriver& d) {
                   add_jumps(StableSubordinatorMeasure{d.index, d.scale});
                 },
                 [&](const DriftedSubordinatorDriver& d) {
                   deterministic_ = d.drift * dt;
                   add_jumps(d.jumps);
                 },
             },
             driver);
}

double IncrementSampler::operator()(RandomStream& stream) const {
  double x = deterministic_;
  for (const auto& part : parts_) {
    switch (part.kind) {
      case Kind::Gaussian:
        x += part.a * stream.standard_normal();
        break;
      case Kind::Atoms:
        x += static_cast<double>(stream.poisson(part.a)) * part.b;
        break;
      case Kind::SymmetricStable:
        x += part.b * sample_standard_symmetric_stable(part.a, stream);
        break;
      case Kind::PositiveStable:
        x += part.b * sample_standard_positive_stable(part.a, stream);
        break;
    }
  }
  return x;
}

std::vector<double> sample_increments(const DriverSpec& driver, const TimeGrid& grid,
                                      RandomStream& stream) {
  std::vector<double> out;
  if (grid.steps() == 0) return out;
  const IncrementSampler sampler(driver, grid.step());
  out.reserve(grid.steps());
  for (std::size_t j = 0; j < grid.steps(); ++j) out.push_back(sampler(stream));
  return out;
}

}  // namespace cylev
