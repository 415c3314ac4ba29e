#include "cylev/stochint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cylev {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

std::vector<double> simulate_integral(const DiagonalIntegrand& f, const SeriesCylLevySpec& spec,
                                      const TimeGrid& grid, const Functional& theta,
                                      std::size_t samples, const SimulationOptions& options,
                                      StreamPurpose purpose) {
  require(grid.horizon() == f.horizon(), "grid and integrand horizons differ");
  return simulate_integral_ladder(f, spec, {grid.steps()}, theta, samples, options, purpose)
      .front();
}

std::vector<std::vector<double>> simulate_integral_ladder(
    const DiagonalIntegrand& f, const SeriesCylLevySpec& spec, const std::vector<std::size_t>& steps,
    const Functional& theta, std::size_t samples, const SimulationOptions& options,
    StreamPurpose purpose) {
  validate(spec);
  require(f.truncation() == spec.truncation(), "integrand and process truncation levels differ");
  require(theta.size() <= spec.truncation(), "functional longer than the truncation level");
  require(samples > 0, "sample count must be >= 1");
  require(!steps.empty(), "ladder needs at least one grid");
  const std::size_t fine = *std::max_element(steps.begin(), steps.end());
  require(fine > 0, "grids need at least one step");
  for (std::size_t n : steps)
    require(n > 0 && fine % n == 0, "every step count must divide the finest one");

  const double T = f.horizon();
  const TimeGrid fine_grid(T, fine);
  // Active modes and their kernel values at each level's left points.
  struct Mode {
    double coefficient;
    std::vector<std::vector<double>> kernel;  // [level][cell]
  };
  std::vector<Mode> modes;
  for (std::size_t k = 1; k <= theta.size(); ++k) {
    const double c = theta[k] * spec.scaling[k];
    if (c == 0.0) continue;
    Mode m{c, {}};
    for (std::size_t n : steps) {
      const TimeGrid grid(T, n);
      std::vector<double> g(n);
      for (std::size_t j = 0; j < n; ++j) g[j] = f.value(k, j == 0 ? 0.0 : grid.node(j));
      m.kernel.push_back(std::move(g));
    }
    modes.push_back(std::move(m));
  }

  const IncrementSampler sampler(spec.driver, fine_grid.step());
  std::vector<std::vector<double>> out(steps.size(), std::vector<double>(samples, 0.0));
  for_each_chunk(samples, options.workers, [&](std::size_t chunk, std::size_t first, std::size_t n) {
    RandomStream stream = derive_stream(options.seed, purpose, chunk);
    std::vector<double> block(steps.size());
    std::vector<double> total(steps.size());
    for (std::size_t p = first; p < first + n; ++p) {
      std::fill(total.begin(), total.end(), 0.0);
      for (const Mode& m : modes) {
        std::fill(block.begin(), block.end(), 0.0);
        std::vector<double> mode_sum(steps.size(), 0.0);
        for (std::size_t j = 0; j < fine; ++j) {
          const double dl = sampler(stream);
          for (std::size_t l = 0; l < steps.size(); ++l) {
            const std::size_t ratio = fine / steps[l];
            block[l] += dl;
            if ((j + 1) % ratio == 0) {
              mode_sum[l] += m.kernel[l][j / ratio] * block[l];
              block[l] = 0.0;
            }
          }
        }
        for (std::size_t l = 0; l < steps.size(); ++l) total[l] += m.coefficient * mode_sum[l];
      }
      for (std::size_t l = 0; l < steps.size(); ++l) out[l][p] = total[l];
    }
  });
  return out;
}

void validate(const OUSpec& spec) {
  validate(spec.noise);
  require(spec.eigenvalues.truncation() == spec.noise.truncation(),
          "eigenvalue and noise truncation levels differ");
  require(spec.initial.size() <= spec.noise.truncation(), "initial value longer than truncation level");
  for (double v : spec.initial) require(std::isfinite(v), "initial value must be finite");
}

PathEnsemble simulate_ou(const OUSpec& spec, std::size_t samples, const SimulationOptions& options,
                         std::size_t record_every) {
  validate(spec);
  require(samples > 0, "sample count must be >= 1");
  const TimeGrid& grid = spec.grid;
  const std::size_t modes = spec.noise.truncation();
  PathEnsemble e;
  e.paths = samples;
  e.modes = modes;
  e.nodes = recorded_nodes(grid.steps(), record_every);
  for (std::size_t j : e.nodes) e.times.push_back(j == 0 ? 0.0 : grid.node(j));
  e.data.assign(samples * e.nodes.size() * modes, 0.0);
  e.seed = options.seed;
  e.scheme = "ou_exponential_left_point";

  std::vector<double> gamma(modes), sigma(modes), v0(modes, 0.0), decay(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    gamma[k] = spec.eigenvalues[k + 1];
    sigma[k] = spec.noise.scaling[k + 1];
    decay[k] = std::exp(gamma[k] * grid.step());
  }
  std::copy(spec.initial.begin(), spec.initial.end(), v0.begin());
  // Deterministic part at recorded nodes, shared by all paths.
  std::vector<double> mean(e.nodes.size() * modes);
  for (std::size_t r = 0; r < e.nodes.size(); ++r)
    for (std::size_t k = 0; k < modes; ++k)
      mean[r * modes + k] = v0[k] == 0.0 ? 0.0 : std::exp(gamma[k] * e.times[r]) * v0[k];

  const IncrementSampler sampler(spec.noise.driver, grid.step());
  for_each_chunk(samples, options.workers, [&](std::size_t chunk, std::size_t first, std::size_t n) {
    RandomStream stream = derive_stream(options.seed, StreamPurpose::OrnsteinUhlenbeck, chunk);
    std::vector<double> noise(modes);
    for (std::size_t p = first; p < first + n; ++p) {
      std::fill(noise.begin(), noise.end(), 0.0);
      for (std::size_t k = 0; k < modes; ++k) e.at(p, 0, k) = mean[k];
      std::size_t rec = 1;
      for (std::size_t j = 1; j <= grid.steps(); ++j) {
        for (std::size_t k = 0; k < modes; ++k)
          if (sigma[k] != 0.0) noise[k] = decay[k] * (noise[k] + sigma[k] * sampler(stream));
        if (rec < e.nodes.size() && e.nodes[rec] == j) {
          for (std::size_t k = 0; k < modes; ++k) e.at(p, rec, k) = mean[rec * modes + k] + noise[k];
          ++rec;
        }
      }
    }
  });
  return e;
}

TimeReversalReport time_reversal_check(const DiagonalIntegrand& f, const SeriesCylLevySpec& spec,
                                       const TimeGrid& grid, const Functional& theta,
                                       const std::vector<double>& multipliers,
                                       std::size_t samples, const SimulationOptions& options,
                                       double allowance) {
  const DiagonalIntegrand back = f.reversed();
  const auto fwd = simulate_integral(f, spec, grid, theta, samples, options, StreamPurpose::Integral);
  const auto rev =
      simulate_integral(back, spec, grid, theta, samples, options, StreamPurpose::IntegralReversed);
  TimeReversalReport r;
  r.forward = empirical_cf(fwd, multipliers);
  r.reversed = empirical_cf(rev, multipliers);
  r.tolerance = 2.0 * cf_error_bound(samples) + allowance;
  const TimeSet whole{{0.0, f.horizon()}};
  for (std::size_t i = 0; i < multipliers.size(); ++i) {
    const std::complex<double> d = r.forward[i].estimate - r.reversed[i].estimate;
    r.max_deviation = std::max({r.max_deviation, std::abs(d.real()), std::abs(d.imag())});
    const Functional scaled = theta.scaled(multipliers[i]);
    r.analytic_difference = std::max(
        r.analytic_difference,
        std::abs(integral_cf(f, spec, whole, scaled) - integral_cf(back, spec, whole, scaled)));
  }
  r.pass = r.max_deviation <= r.tolerance;
  return r;
}

}  // namespace cylev
