#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cylev/cylproc.hpp"
#include "cylev/integrability.hpp"
#include "cylev/levy1d.hpp"
#include "cylev/sequence.hpp"

namespace cylev::app {

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThetaSpec {
  Functional functional;
  std::vector<double> multipliers{1.0};
};

struct CheckSpec {
  std::optional<ModeSequence> covariance;
  double p = 2.0;
};

struct OUSection {
  ModeSequence eigenvalues;
  std::size_t record_every = 1;
};

using ProcessSpec = std::variant<SeriesCylLevySpec, SubordinatedWienerSpec>;

struct ExperimentConfig {
  ProcessSpec process = SeriesCylLevySpec{ModeSequence::constant(0.0, 1), BrownianDriver{}};
  std::size_t truncation = 1;
  std::optional<std::uint64_t> seed;
  std::optional<DiagonalIntegrand> integrand;
  double horizon = 1.0;
  std::size_t steps = 1;
  std::size_t samples = 1;
  ThetaSpec theta;
  std::vector<double> initial;
  double ks_level = 0.01;
  double allowance = 0.0;
  std::size_t record_every = 1;
  CheckSpec check;
  std::optional<OUSection> ou;
  std::string output_directory = ".";
};

/// Strict parse: unknown keys, wrong types and out-of-domain values raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

DriverSpec parse_driver(const nlohmann::json& j);
LevyMeasure1D parse_measure(const nlohmann::json& j);
ModeSequence parse_sequence(const nlohmann::json& j, std::size_t truncation);

}  // namespace cylev::app
