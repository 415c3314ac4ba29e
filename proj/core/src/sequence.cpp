#include "cylev/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "overloaded.hpp"

namespace cylev {
namespace {

constexpr double kEps = 1e-12;

using detail::overloaded;

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

Asymptote Asymptote::pow(double q) const {
  switch (kind) {
    case Kind::Zero:
      return q > 0.0 ? zero() : unknown();
    case Kind::Unknown:
      return unknown();
    case Kind::Regular:
      return regular(std::pow(coefficient, q), power * q, rate * q);
  }
  return unknown();
}

Asymptote operator*(const Asymptote& a, const Asymptote& b) {
  using K = Asymptote::Kind;
  if (a.kind == K::Zero || b.kind == K::Zero) return Asymptote::zero();
  if (a.kind == K::Unknown || b.kind == K::Unknown) return Asymptote::unknown();
  return Asymptote::regular(a.coefficient * b.coefficient, a.power + b.power, a.rate + b.rate);
}

std::optional<bool> Asymptote::summable() const {
  switch (kind) {
    case Kind::Zero:
      return true;
    case Kind::Unknown:
      return std::nullopt;
    case Kind::Regular:
      if (rate < -kEps) return true;
      if (rate > kEps) return false;
      return power < -1.0 - kEps;
  }
  return std::nullopt;
}

std::optional<bool> Asymptote::bounded() const {
  switch (kind) {
    case Kind::Zero:
      return true;
    case Kind::Unknown:
      return std::nullopt;
    case Kind::Regular:
      if (rate < -kEps) return true;
      if (rate > kEps) return false;
      return power <= kEps;
  }
  return std::nullopt;
}

std::optional<bool> Asymptote::vanishes() const {
  switch (kind) {
    case Kind::Zero:
      return true;
    case Kind::Unknown:
      return std::nullopt;
    case Kind::Regular:
      if (rate < -kEps) return true;
      if (rate > kEps) return false;
      return power < -kEps;
  }
  return std::nullopt;
}

std::string Asymptote::describe() const {
  switch (kind) {
    case Kind::Zero:
      return "eventually 0";
    case Kind::Unknown:
      return "unknown tail";
    case Kind::Regular: {
      std::string s = fmt(coefficient) + " k^" + fmt(power);
      if (rate != 0.0) s += " exp(" + fmt(rate) + " k)";
      return s;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------

ModeSequence::ModeSequence(SequenceGenerator generator, std::size_t truncation)
    : generator_(std::move(generator)), truncation_(truncation) {
  if (truncation_ == 0) throw std::invalid_argument("truncation level must be >= 1");
  std::visit(overloaded{
                 [](const PowerDecay& g) {
                   if (!std::isfinite(g.amplitude) || !std::isfinite(g.exponent))
                     throw std::invalid_argument("power sequence parameters must be finite");
                 },
                 [](const ExpDecay& g) {
                   if (!std::isfinite(g.amplitude) || !std::isfinite(g.rate))
                     throw std::invalid_argument("exponential sequence parameters must be finite");
                 },
                 [](const ConstantSequence& g) {
                   if (!std::isfinite(g.value))
                     throw std::invalid_argument("constant sequence value must be finite");
                 },
                 [&](const ExplicitSequence& g) {
                   if (g.values.size() < truncation_ && !g.finite_support)
                     throw std::invalid_argument("explicit sequence shorter than truncation level");
                   for (double v : g.values)
                     if (!std::isfinite(v))
                       throw std::invalid_argument("explicit sequence values must be finite");
                 },
             },
             generator_);
}

ModeSequence ModeSequence::power(double amplitude, double exponent, std::size_t truncation) {
  return {PowerDecay{amplitude, exponent}, truncation};
}

ModeSequence ModeSequence::exponential(double amplitude, double rate, std::size_t truncation) {
  return {ExpDecay{amplitude, rate}, truncation};
}

ModeSequence ModeSequence::constant(double value, std::size_t truncation) {
  return {ConstantSequence{value}, truncation};
}

ModeSequence ModeSequence::explicit_values(std::vector<double> values, bool finite_support) {
  const std::size_t n = std::max<std::size_t>(values.size(), 1);
  return {ExplicitSequence{std::move(values), finite_support}, n};
}

double ModeSequence::operator[](std::size_t k) const {
  if (k == 0) throw std::out_of_range("mode index is 1-based");
  const double dk = static_cast<double>(k);
  return std::visit(overloaded{
                        [&](const PowerDecay& g) { return g.amplitude * std::pow(dk, -g.exponent); },
                        [&](const ExpDecay& g) { return g.amplitude * std::exp(-g.rate * dk); },
                        [](const ConstantSequence& g) { return g.value; },
                        [&](const ExplicitSequence& g) {
                          if (k <= g.values.size()) return g.values[k - 1];
                          if (g.finite_support) return 0.0;
                          throw std::out_of_range("explicit sequence has no value for mode " +
                                                  std::to_string(k));
                        },
                    },
                    generator_);
}

std::vector<double> ModeSequence::values() const {
  std::vector<double> out(truncation_);
  for (std::size_t k = 1; k <= truncation_; ++k) out[k - 1] = (*this)[k];
  return out;
}

bool ModeSequence::parametric() const {
  if (const auto* e = std::get_if<ExplicitSequence>(&generator_)) return e->finite_support;
  return true;
}

ModeSequence ModeSequence::with_truncation(std::size_t truncation) const {
  return {generator_, truncation};
}

Asymptote ModeSequence::asymptote() const {
  return std::visit(
      overloaded{
          [](const PowerDecay& g) { return Asymptote::regular(std::abs(g.amplitude), -g.exponent, 0.0); },
          [](const ExpDecay& g) { return Asymptote::regular(std::abs(g.amplitude), 0.0, -g.rate); },
          [](const ConstantSequence& g) { return Asymptote::regular(std::abs(g.value), 0.0, 0.0); },
          [](const ExplicitSequence& g) {
            return g.finite_support ? Asymptote::zero() : Asymptote::unknown();
          },
      },
      generator_);
}

std::optional<int> ModeSequence::eventual_sign() const {
  return std::visit(overloaded{
                        [](const PowerDecay& g) -> std::optional<int> { return sign_of(g.amplitude); },
                        [](const ExpDecay& g) -> std::optional<int> { return sign_of(g.amplitude); },
                        [](const ConstantSequence& g) -> std::optional<int> { return sign_of(g.value); },
                        [](const ExplicitSequence& g) -> std::optional<int> {
                          if (g.finite_support) return 0;
                          return std::nullopt;
                        },
                    },
                    generator_);
}

std::optional<int> ModeSequence::uniform_sign() const {
  if (const auto* e = std::get_if<ExplicitSequence>(&generator_)) {
    if (!e->finite_support || e->values.empty()) return std::nullopt;
    const int s = sign_of(e->values.front());
    for (double v : e->values)
      if (sign_of(v) != s) return std::nullopt;
    return s;
  }
  return eventual_sign();
}

std::optional<bool> ModeSequence::in_lp(double p) const {
  const Asymptote a = asymptote();
  if (std::isinf(p)) return a.bounded();
  if (!(p > 0.0)) throw std::invalid_argument("l^p exponent must be positive");
  return a.pow(p).summable();
}

// ---------------------------------------------------------------------------

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Converges:
      return "converges";
    case Verdict::Diverges:
      return "diverges";
    case Verdict::Undecided:
      return "undecided";
  }
  return "undecided";
}

VerdictReport classify_series(const Asymptote& summand, const std::string& condition) {
  VerdictReport r;
  r.condition = condition;
  const auto s = summand.summable();
  if (!s) {
    r.verdict = Verdict::Undecided;
    r.witness = "summand tail not decidable (" + summand.describe() + ")";
  } else if (*s) {
    r.verdict = Verdict::Converges;
    r.witness = "summand ~ " + summand.describe() + " is summable";
  } else {
    r.verdict = Verdict::Diverges;
    r.witness = "summand ~ " + summand.describe() + " is not summable";
  }
  return r;
}

std::string lp_label(double p) {
  if (std::isinf(p)) return "l^inf";
  return "l^" + fmt(p);
}

}  // namespace cylev
