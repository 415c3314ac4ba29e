#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cylev/errors.hpp"
#include "cylev/levy1d.hpp"
#include "cylev/mcvalid.hpp"
#include "oracle.hpp"

using namespace cylev;
using std::numbers::pi;

namespace {

const std::vector<DriverSpec> kDrivers = {
    BrownianDriver{1.3},
    PoissonDriver{2.0, 0.7},
    CompensatedPoissonDriver{1.5, -1.4},
    SymmetricStableDriver{1.2, 0.8},
    StableSubordinatorDriver{0.6, 1.1},
    DriftedSubordinatorDriver{0.4, FiniteAtomsMeasure{{{1.0, 0.5}, {0.5, 2.0}}}},
};

const std::vector<LevyTriplet1D> kTriplets = {
    {0.0, 1.0, NoJumps{}},
    {0.3, 0.0, PoissonAtomMeasure{{1.0, 1.0}}},
    {-0.2, 0.5, FiniteAtomsMeasure{{{1.0, 0.3}, {2.0, -1.7}}}},
    {0.0, 0.0, SymmetricStableMeasure{0.5, 1.0}},
    {0.0, 0.0, SymmetricStableMeasure{1.0, 2.0}},
    {0.1, 0.2, SymmetricStableMeasure{1.7, 0.6}},
    {0.0, 0.0, StableSubordinatorMeasure{0.3, 1.0}},
    {0.5, 0.0, StableSubordinatorMeasure{0.8, 0.7}},
};

}  // namespace

TEST_CASE("symbol_1d worked values") {
  CHECK(symbol_1d({0.0, 1.0, NoJumps{}}, 2.0) == std::complex<double>(-2.0, 0.0));
  const auto poisson = symbol_1d(triplet_of(PoissonDriver{1.0, 1.0}), pi);
  CHECK(poisson.real() == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(std::abs(poisson.imag()) < 1e-14);
  const auto stable = symbol_1d({0.0, 0.0, SymmetricStableMeasure{1.0, 1.0}}, 1.0);
  CHECK(stable.real() == doctest::Approx(-pi / 2).epsilon(1e-12));
  CHECK(stable.imag() == 0.0);
}

TEST_CASE("stable symbol constant matches an independent quadrature") {
  for (double alpha : {0.3, 0.5, 1.0, 1.3, 1.5, 1.9})
    CHECK(stable_symbol_constant(alpha) == doctest::Approx(oracle::stable_constant(alpha)).epsilon(1e-9));
}

TEST_CASE("driver triplets reproduce the textbook characteristic functions") {
  for (double theta : {-2.0, -0.3, 0.1, 0.5, 1.0, 2.0, 7.0}) {
    auto cf = [&](const DriverSpec& d) { return std::exp(symbol_1d(triplet_of(d), theta)); };
    auto near = [](std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9; };
    CHECK(near(cf(BrownianDriver{1.3}), oracle::gaussian_cf(1.3, theta)));
    CHECK(near(cf(PoissonDriver{2.0, 0.7}), oracle::poisson_cf(2.0, 0.7, theta)));
    CHECK(near(cf(PoissonDriver{2.0, 3.0}), oracle::poisson_cf(2.0, 3.0, theta)));
    CHECK(near(cf(CompensatedPoissonDriver{1.5, -1.4}), oracle::compensated_poisson_cf(1.5, -1.4, theta)));
    CHECK(near(cf(SymmetricStableDriver{1.2, 0.8}), oracle::symmetric_stable_cf(1.2, 0.8, theta)));
    CHECK(near(cf(StableSubordinatorDriver{0.6, 1.1}), oracle::positive_stable_cf(0.6, 1.1, theta)));
    const auto drifted = std::exp(std::complex<double>(0.0, 0.4 * theta)) *
                         oracle::poisson_cf(1.0, 0.5, theta) * oracle::poisson_cf(0.5, 2.0, theta);
    CHECK(near(cf(kDrivers[5]), drifted));
  }
}

TEST_CASE("symbol invariants: psi(0) = 0, conjugate symmetry, Re psi <= 0") {
  for (const auto& t : kTriplets) {
    CHECK(symbol_1d(t, 0.0) == std::complex<double>(0.0, 0.0));
    for (double theta : {0.01, 0.4, 1.0, 3.0, 25.0}) {
      const auto a = symbol_1d(t, theta);
      const auto b = symbol_1d(t, -theta);
      CHECK(a == std::conj(b));
      CHECK(a.real() <= 0.0);
    }
  }
  for (const auto& d : kDrivers)
    for (double theta = -10.0; theta <= 10.0; theta += 0.37) {
      CHECK(symbol_1d(triplet_of(d), theta).real() <= 0.0);
      CHECK(std::abs(std::exp(symbol_1d(triplet_of(d), theta))) <= 1.0);
    }
}

TEST_CASE("closed form and quadrature symbols agree") {
  for (const auto& t : kTriplets)
    for (double theta : {-3.0, -0.2, 0.7, 1.0, 4.0}) {
      const auto closed = symbol_1d(t, theta);
      const auto quad = symbol_1d_quadrature(t, theta);
      CHECK(std::abs(closed - quad) <= 1e-8 * std::max(1.0, std::abs(closed)));
    }
  const LevyTriplet1D t{0.0, 0.0, SymmetricStableMeasure{1.3, 1.0}};
  CHECK(symbol_1d_quadrature(t, 0.0) == std::complex<double>(0.0, 0.0));
  const auto q = symbol_1d_quadrature(t, 2.0);
  CHECK(std::abs(q - std::conj(symbol_1d_quadrature(t, -2.0))) < 1e-9);
}

TEST_CASE("stable scaling psi(c theta) = |c|^alpha psi(theta)") {
  for (double alpha : {0.5, 1.0, 1.5})
    for (double c : {-3.0, 0.25, 2.0}) {
      const LevyTriplet1D t{0.0, 0.0, SymmetricStableMeasure{alpha, 1.4}};
      const auto lhs = symbol_1d(t, c * 0.8);
      const auto rhs = std::pow(std::abs(c), alpha) * symbol_1d(t, 0.8);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
      const auto lq = symbol_1d_quadrature(t, c * 0.8);
      const auto rq = std::pow(std::abs(c), alpha) * symbol_1d_quadrature(t, 0.8);
      CHECK(std::abs(lq - rq) <= 1e-8 * std::abs(rq));
    }
}

TEST_CASE("symbol stays finite on [-c, c]") {
  for (const auto& t : kTriplets)
    for (double c : {1.0, 10.0})
      for (int i = 0; i < 1000; ++i) {
        const double theta = -c + 2.0 * c * i / 999.0;
        CHECK(std::isfinite(std::abs(symbol_1d(t, theta))));
      }
}

TEST_CASE("truncated second moment") {
  CHECK(truncated_second_moment_integral(SymmetricStableMeasure{1.0, 1.0}, 1.0) == doctest::Approx(2.0));
  CHECK(truncated_second_moment_integral(SymmetricStableMeasure{1.5, 1.0}, 1.0) ==
        doctest::Approx(8.0 / 3.0));
  for (const LevyMeasure1D& m : {LevyMeasure1D{NoJumps{}}, LevyMeasure1D{SymmetricStableMeasure{1.2, 1.0}},
                                LevyMeasure1D{PoissonAtomMeasure{{2.0, 3.0}}}})
    CHECK(truncated_second_moment_integral(m, 0.0) == 0.0);
  CHECK(truncated_second_moment_integral(NoJumps{}, 3.0) == 0.0);
  // atoms: 2 * min(0.25 * 9, 1) + 1 * min(0.25 * 0.01, 1)
  const FiniteAtomsMeasure atoms{{{2.0, 3.0}, {1.0, -0.1}}};
  CHECK(truncated_second_moment_integral(atoms, 0.5) == doctest::Approx(2.0 + 0.0025).epsilon(1e-15));
  for (double alpha : {0.5, 1.0, 1.5})
    for (double c : {0.5, 1.0, 2.0}) {
      const SymmetricStableMeasure m{alpha, 1.3};
      const double closed = truncated_second_moment_integral(m, c);
      CHECK(closed == doctest::Approx(2.0 * std::pow(c * 1.3, alpha) / (alpha * (2 - alpha))).epsilon(1e-13));
      CHECK(closed == doctest::Approx(oracle::stable_truncated_second_moment(alpha, 1.3, c)).epsilon(1e-9));
      CHECK(truncated_second_moment_quadrature(m, c) == doctest::Approx(closed).epsilon(1e-8));
    }
  const StableSubordinatorMeasure sub{0.6, 1.0};
  const double k = 0.6 / std::tgamma(0.4);
  const double expected = oracle::integrate_half_line(
      [&](double s) { return std::min(4.0 * s * s, 1.0) * k * std::pow(s, -1.6); }, 0.5);
  CHECK(truncated_second_moment_integral(sub, 2.0) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("truncated moments of other orders") {
  const SymmetricStableMeasure m{1.0, 1.0};
  CHECK(truncated_moment_integral(m, 1.0, 2.0) == doctest::Approx(2.0));
  for (double p : {1.5, 3.0}) {
    const double expected = oracle::integrate_half_line(
        [&](double b) { return std::min(std::pow(0.7 * b, p), 1.0) * std::pow(b, -1.5) * std::pow(1.0, 0.5); },
        1.0 / 0.7);
    CHECK(truncated_moment_integral(SymmetricStableMeasure{0.5, 1.0}, 0.7, p) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
  const double small = oracle::integrate_half_line(
      [](double b) { return b < 1.0 / 0.7 ? 0.49 * b * b * std::pow(b, -2.5) : 0.0; }, 1.0 / 0.7);
  CHECK(small_jump_second_moment(SymmetricStableMeasure{1.5, 1.0}, 0.7) ==
        doctest::Approx(small).epsilon(1e-9));
  CHECK(small_jump_second_moment(PoissonAtomMeasure{{2.0, 3.0}}, 0.5) == 0.0);
  CHECK(small_jump_second_moment(PoissonAtomMeasure{{2.0, 3.0}}, 0.3) == doctest::Approx(2.0 * 0.81));
}

TEST_CASE("drift_rescale") {
  const LevyTriplet1D stable{0.0, 0.0, SymmetricStableMeasure{1.3, 1.0}};
  for (double a : {-2.0, 0.3, 5.0}) CHECK(drift_rescale(stable, a) == 0.0);
  const LevyTriplet1D poisson{1.0, 0.0, PoissonAtomMeasure{{1.0, 1.0}}};
  CHECK(drift_rescale(poisson, 0.5) == doctest::Approx(0.5));
  CHECK(drift_rescale(poisson, 2.0) == doctest::Approx(0.0));
  CHECK(drift_rescale(poisson, 1.0) == doctest::Approx(1.0));
  // Scaled triplets reproduce psi_base(a theta).
  for (const auto& t : kTriplets)
    for (double a : {0.3, 2.5, -1.7}) {
      if (std::holds_alternative<StableSubordinatorMeasure>(t.jumps) && a < 0) {
        CHECK_THROWS_AS(scale_triplet(t, a), std::invalid_argument);
        continue;
      }
      const auto scaled = scale_triplet(t, a);
      for (double theta : {0.4, 1.9})
        CHECK(std::abs(symbol_1d(scaled, theta) - symbol_1d(t, a * theta)) < 1e-9);
    }
}

TEST_CASE("laplace exponent") {
  for (const auto& d : {kDrivers[4], kDrivers[5]}) {
    CHECK(laplace_exponent(d, 0.0) == 0.0);
    CHECK_THROWS_AS(laplace_exponent(d, -1.0), std::invalid_argument);
    double prev = 0.0, prev_slope = INFINITY;
    for (double b = 0.1; b < 10.0; b += 0.1) {
      const double v = laplace_exponent(d, b);
      CHECK(v >= prev);
      CHECK((v - prev) / 0.1 <= prev_slope + 1e-12);
      prev_slope = (v - prev) / 0.1;
      prev = v;
    }
  }
  CHECK(laplace_exponent(DriftedSubordinatorDriver{0.0, PoissonAtomMeasure{{1.0, 1.0}}}, std::log(2.0)) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(laplace_exponent(StableSubordinatorDriver{0.5, 1.0}, 4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(laplace_exponent(BrownianDriver{1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(LevyMeasure1D{SymmetricStableMeasure{2.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LevyMeasure1D{SymmetricStableMeasure{1.9999999, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LevyMeasure1D{SymmetricStableMeasure{0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LevyMeasure1D{PoissonAtomMeasure{{1.0, 0.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LevyMeasure1D{PoissonAtomMeasure{{-1.0, 1.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LevyMeasure1D{StableSubordinatorMeasure{1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LevyTriplet1D{0.0, -1.0, NoJumps{}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(DriverSpec{DriftedSubordinatorDriver{-1.0, NoJumps{}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(DriverSpec{DriftedSubordinatorDriver{0.0, PoissonAtomMeasure{{1.0, -1.0}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid(0.0, 4), std::invalid_argument);
  CHECK(is_finite(FiniteAtomsMeasure{{{1.0, 2.0}, {0.5, 1.0}}}));
  CHECK(total_mass(FiniteAtomsMeasure{{{1.0, 2.0}, {0.5, 1.0}}}) == 1.5);
  CHECK(std::isinf(total_mass(SymmetricStableMeasure{1.0, 1.0})));
  CHECK(is_one_sided(StableSubordinatorMeasure{0.5, 1.0}));
}

TEST_CASE("time grid") {
  const TimeGrid g(2.0, 8);
  CHECK(g.step() == 0.25);
  CHECK(g.node(8) == 2.0);
  for (std::size_t j = 0; j < 8; ++j) CHECK(g.node(j) < g.node(j + 1));
  const TimeGrid fine(2.0, 16);
  for (std::size_t j = 0; j <= 8; ++j) CHECK(fine.node(2 * j) == g.node(j));
}

TEST_CASE("sample_increments moments and degenerate grid") {
  RandomStream s(11);
  const auto bm = sample_increments(BrownianDriver{1.0}, TimeGrid(1e5, 100000), s);
  REQUIRE(bm.size() == 100000);
  double mean = 0.0;
  for (double x : bm) mean += x / 1e5;
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(1e5));
  const auto po = sample_increments(PoissonDriver{2.0, 1.0}, TimeGrid(5e4, 100000), s);
  mean = 0.0;
  for (double x : po) mean += x / 1e5;
  CHECK(std::abs(mean - 1.0) <= 4.0 / std::sqrt(1e5));
  for (double x : po) CHECK(x == std::floor(x));
  for (const auto& d : kDrivers) CHECK(sample_increments(d, TimeGrid(1.0, 0), s).empty());
  RandomStream a(5), b(5);
  CHECK(sample_increments(kDrivers[3], TimeGrid(1.0, 50), a) ==
        sample_increments(kDrivers[3], TimeGrid(1.0, 50), b));
  RandomStream c(3);
  for (double x : sample_increments(kDrivers[4], TimeGrid(1.0, 2000), c)) CHECK(x >= 0.0);
}

TEST_CASE("standard stable samplers match their transforms") {
  RandomStream s(99);
  const std::vector<double> thetas{0.3, 1.0, 2.0};
  for (double alpha : {0.7, 1.0, 1.6}) {
    std::vector<double> x(40000);
    for (double& v : x) v = sample_standard_symmetric_stable(alpha, s);
    const auto cmp = cf_compare(empirical_cf(x, thetas), [&](double t) {
      return std::complex<double>(std::exp(-std::pow(std::abs(t), alpha)));
    });
    CHECK(cmp.pass);
  }
  for (double index : {0.3, 0.8}) {
    std::vector<double> x(40000);
    for (double& v : x) v = sample_standard_positive_stable(index, s);
    const auto cmp = cf_compare(empirical_cf(x, thetas),
                                [&](double t) { return oracle::positive_stable_cf(index, 1.0, t); });
    CHECK(cmp.pass);
  }
}
