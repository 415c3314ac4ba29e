#include <doctest.h>

#include <cmath>

#include "cylev/mcvalid.hpp"
#include "cylev/stochint.hpp"

using namespace cylev;

TEST_CASE("identity kernel integral has the law of the action") {
  const SeriesCylLevySpec s{ModeSequence::power(1.0, 0.5, 3), SymmetricStableDriver{1.4, 1.0}};
  const auto f = DiagonalIntegrand::constant(ModeSequence::constant(1.0, 3), 2.0);
  const Functional theta{{1.0, 0.5, -1.0}};
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const auto x = simulate_integral(f, s, TimeGrid(2.0, 16), theta, 50000, {3, 1});
  const auto cmp = cf_compare(empirical_cf(x, grid), [&](double m) {
    return std::exp(2.0 * cylindrical_symbol(s, theta.scaled(m)));
  });
  CHECK(cmp.pass);
  for (double m : grid)
    CHECK(std::abs(integral_cf(f, s, {{0.0, 2.0}}, theta.scaled(m)) -
                   std::exp(2.0 * cylindrical_symbol(s, theta.scaled(m)))) < 1e-12);
}

TEST_CASE("Brownian integral variance") {
  const SeriesCylLevySpec s{ModeSequence::constant(1.0, 1), BrownianDriver{1.0}};
  const double T = 1.0;
  const auto f = DiagonalIntegrand::semigroup_forward(ModeSequence::constant(-1.0, 1), T);
  const std::size_t M = 100000;
  const auto x = simulate_integral(f, s, TimeGrid(T, 1024), Functional::unit(1), M, {8, 1});
  double mean = 0.0, var = 0.0;
  for (double v : x) mean += v / M;
  for (double v : x) var += (v - mean) * (v - mean) / (M - 1);
  const double exact = (1 - std::exp(-2 * T)) / 2;
  // Sample variance of a Gaussian has standard deviation exact * sqrt(2 / M).
  CHECK(std::abs(var - exact) <= 3.0 * exact * std::sqrt(2.0 / M) + 1e-3);
}

TEST_CASE("ladder levels share increments") {
  const SeriesCylLevySpec s{ModeSequence::power(1.0, 1.0, 2), CompensatedPoissonDriver{3.0, 0.4}};
  const auto f = DiagonalIntegrand::semigroup_forward(ModeSequence::power(-2.0, -1.0, 2), 1.0);
  const Functional theta{{1.0, 2.0}};
  const auto ladder = simulate_integral_ladder(f, s, {4, 8, 16}, theta, 300, {77, 1});
  REQUIRE(ladder.size() == 3);
  CHECK(ladder[2] == simulate_integral(f, s, TimeGrid(1.0, 16), theta, 300, {77, 1}));
  // Constant kernels make every level the same sum of the same increments.
  const auto c = DiagonalIntegrand::constant(ModeSequence::constant(1.0, 2), 1.0);
  const auto flat = simulate_integral_ladder(c, s, {4, 16}, theta, 50, {77, 1});
  for (std::size_t p = 0; p < 50; ++p) CHECK(flat[0][p] == doctest::Approx(flat[1][p]).epsilon(1e-13));
  CHECK_THROWS_AS(simulate_integral_ladder(f, s, {3, 8}, theta, 10, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(simulate_integral(f, s, TimeGrid(2.0, 8), theta, 10, {1, 1}), std::invalid_argument);
}

TEST_CASE("OU with zero noise decays exactly") {
  const OUSpec spec{ModeSequence::power(-1.0, -1.0, 3), {1.0, -2.0, 0.5},
                    SeriesCylLevySpec{ModeSequence::constant(0.0, 3), BrownianDriver{1.0}}, TimeGrid(2.0, 8)};
  const auto e = simulate_ou(spec, 3, {1, 1});
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t r = 0; r < e.recorded(); ++r)
      for (std::size_t k = 0; k < 3; ++k)
        CHECK(e.at(p, r, k) == std::exp(-(k + 1.0) * e.times[r]) * spec.initial[k]);
  CHECK(e.at(0, 0, 1) == -2.0);
  // Shared nodes agree bitwise under grid refinement.
  OUSpec fine = spec;
  fine.grid = TimeGrid(2.0, 32);
  const auto g = simulate_ou(fine, 3, {1, 1});
  for (std::size_t r = 0; r < e.recorded(); ++r)
    for (std::size_t k = 0; k < 3; ++k) CHECK(g.at(1, 4 * r, k) == e.at(1, r, k));
}

TEST_CASE("OU ensembles are linear and worker independent") {
  const OUSpec spec{ModeSequence::power(-1.0, -1.0, 4), {},
                    SeriesCylLevySpec{ModeSequence::power(1.0, 1.0, 4), SymmetricStableDriver{1.5, 1.0}},
                    TimeGrid(1.0, 64)};
  const auto a = simulate_ou(spec, 9000, {4, 1}, 16);
  const auto b = simulate_ou(spec, 9000, {4, 3}, 16);
  CHECK(a.data == b.data);
  CHECK(a.nodes == std::vector<std::size_t>{0, 16, 32, 48, 64});
  const Functional u{{1.0, 0.0, 2.0, -1.0}}, v{{0.5, 1.0, 0.0, 3.0}}, uv{{1.5, 1.0, 2.0, 2.0}};
  for (std::size_t p = 0; p < 100; ++p)
    CHECK(a.action(p, 4, uv) == doctest::Approx(a.action(p, 4, u) + a.action(p, 4, v)).epsilon(1e-14));
}

TEST_CASE("stable OU terminal law") {
  const SeriesCylLevySpec noise{ModeSequence::constant(1.0, 1), SymmetricStableDriver{1.5, 1.0}};
  const OUSpec spec{ModeSequence::constant(-1.0, 1), {}, noise, TimeGrid(2.0, 512)};
  const auto e = simulate_ou(spec, 50000, {12, 1}, 512);
  const auto x = e.actions(e.recorded() - 1, Functional::unit(1));
  const auto f = DiagonalIntegrand::semigroup_convolution(ModeSequence::constant(-1.0, 1), 2.0);
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const auto cmp = cf_compare(empirical_cf(x, grid), [&](double m) {
    return integral_cf(f, noise, {{0.0, 2.0}}, Functional::unit(1, m));
  }, 0.01);
  CHECK(cmp.pass);
}

TEST_CASE("time reversal on simple kernels") {
  const SeriesCylLevySpec bm{ModeSequence::constant(1.0, 1), BrownianDriver{1.0}};
  const auto f = DiagonalIntegrand::semigroup_forward(ModeSequence::constant(-1.0, 1), 1.0);
  const auto r = time_reversal_check(f, bm, TimeGrid(1.0, 256), Functional::unit(1), {0.5, 1.0, 2.0}, 40000,
                                     {2, 1}, 0.01);
  CHECK(r.pass);
  CHECK(r.analytic_difference < 1e-12);
  const auto c = DiagonalIntegrand::constant(ModeSequence::constant(0.7, 1), 1.0);
  CHECK(time_reversal_check(c, bm, TimeGrid(1.0, 8), Functional::unit(1), {1.0, 2.0}, 20000, {2, 1}, 0.0).pass);
}
