#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cylev {

/// Asymptotic class of a non-negative sequence: either eventually zero, or
/// |x_k| ~ coefficient * k^power * exp(rate * k) as k -> infinity, or unknown.
/// Sufficient for limit-comparison tests of every series the library checks.
struct Asymptote {
  enum class Kind { Zero, Regular, Unknown };

  Kind kind = Kind::Unknown;
  double coefficient = 0.0;
  double power = 0.0;
  double rate = 0.0;

  static Asymptote zero() { return {Kind::Zero, 0.0, 0.0, 0.0}; }
  static Asymptote unknown() { return {}; }
  static Asymptote regular(double coefficient, double power, double rate) {
    if (coefficient == 0.0) return zero();
    return {Kind::Regular, coefficient, power, rate};
  }

  /// |x_k|^q. Negative q on an eventually-zero sequence is unknown.
  Asymptote pow(double q) const;
  friend Asymptote operator*(const Asymptote& a, const Asymptote& b);

  std::optional<bool> summable() const;
  std::optional<bool> bounded() const;
  std::optional<bool> vanishes() const;
  std::string describe() const;
};

struct PowerDecay {
  double amplitude = 1.0;
  double exponent = 1.0;  // x_k = amplitude * k^(-exponent)
};
struct ExpDecay {
  double amplitude = 1.0;
  double rate = 1.0;  // x_k = amplitude * exp(-rate * k)
};
struct ConstantSequence {
  double value = 0.0;
};
/// Explicit values x_1..x_n. With `finite_support` the sequence is zero after
/// the list; otherwise the tail is unknown.
struct ExplicitSequence {
  std::vector<double> values;
  bool finite_support = false;
};

using SequenceGenerator = std::variant<PowerDecay, ExpDecay, ConstantSequence, ExplicitSequence>;

/// Real sequence (x_k), k >= 1, truncated at N modes for numerics.
class ModeSequence {
 public:
  ModeSequence(SequenceGenerator generator, std::size_t truncation);

  static ModeSequence power(double amplitude, double exponent, std::size_t truncation);
  static ModeSequence exponential(double amplitude, double rate, std::size_t truncation);
  static ModeSequence constant(double value, std::size_t truncation);
  static ModeSequence explicit_values(std::vector<double> values, bool finite_support = false);

  /// x_k for 1-based k. Explicit sequences without finite support throw past
  /// their list.
  double operator[](std::size_t k) const;
  std::size_t truncation() const { return truncation_; }
  /// x_1..x_N.
  std::vector<double> values() const;
  const SequenceGenerator& generator() const { return generator_; }
  bool parametric() const;
  ModeSequence with_truncation(std::size_t truncation) const;

  /// Asymptotic class of |x_k|.
  Asymptote asymptote() const;
  /// Sign of x_k for all large k (0 for eventually zero); nullopt if unknown.
  std::optional<int> eventual_sign() const;
  /// Sign of every x_k, k >= 1, when it is constant; nullopt otherwise.
  std::optional<int> uniform_sign() const;
  /// Membership in l^p; p may be +infinity. nullopt when undecidable.
  std::optional<bool> in_lp(double p) const;

 private:
  SequenceGenerator generator_;
  std::size_t truncation_;
};

enum class Verdict { Converges, Diverges, Undecided };

const char* to_string(Verdict verdict);

/// Outcome of a convergence or integrability check. `condition` names the
/// deciding condition, `witness` explains it (exponent inequality, failing
/// mode, ...). `value` carries the truncated numeric sum when one exists.
struct VerdictReport {
  Verdict verdict = Verdict::Undecided;
  std::string condition;
  std::string witness;
  std::optional<double> value;
  std::vector<double> partial_sums;
};

/// Decides summability of a non-negative series from the asymptote of its terms.
VerdictReport classify_series(const Asymptote& summand, const std::string& condition);

/// Human-readable l^p label, "l^inf" for p = infinity.
std::string lp_label(double p);

}  // namespace cylev
