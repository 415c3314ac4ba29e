#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cylev/mcvalid.hpp"
#include "cylev/rng.hpp"

using namespace cylev;

TEST_CASE("empirical cf basics") {
  const std::vector<double> x{0.3, -1.2, 5.0, 2.2};
  const std::vector<double> zero{0.0};
  CHECK(empirical_cf(x, zero)[0].estimate == std::complex<double>(1.0, 0.0));
  const std::vector<double> c(17, 0.8);
  for (double t : {-3.0, 0.5, 2.0}) {
    const std::vector<double> th{t};
    const auto e = empirical_cf(c, th)[0].estimate;
    CHECK(e.real() == std::cos(t * 0.8));
    CHECK(e.imag() == std::sin(t * 0.8));
  }
  CHECK_THROWS_AS(empirical_cf(std::vector<double>{}, zero), std::invalid_argument);
}

TEST_CASE("empirical cf is conjugate symmetric and permutation invariant") {
  RandomStream s(3);
  std::vector<double> x(5000);
  for (double& v : x) v = 3.0 * s.standard_normal() + 0.4;
  const std::vector<double> th{0.1, 0.7, 1.3, 4.0};
  const std::vector<double> neg{-0.1, -0.7, -1.3, -4.0};
  const auto a = empirical_cf(x, th);
  const auto b = empirical_cf(x, neg);
  std::mt19937_64 g(1);
  std::shuffle(x.begin(), x.end(), g);
  const auto c = empirical_cf(x, th);
  for (std::size_t i = 0; i < th.size(); ++i) {
    CHECK(a[i].estimate == std::conj(b[i].estimate));
    CHECK(a[i].estimate == c[i].estimate);
    CHECK(std::abs(a[i].estimate) <= 1.0 + 2.0 * a[i].bound);
  }
}

TEST_CASE("error bound") {
  CHECK(cf_error_bound(10000) == doctest::Approx(0.04).epsilon(1e-15));
  for (std::size_t m : {1u, 7u, 100u, 12345u})
    CHECK(cf_error_bound(2 * m) == doctest::Approx(cf_error_bound(m) / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("Gaussian cf and comparisons") {
  RandomStream s(5);
  std::vector<double> x(100000);
  for (double& v : x) v = s.standard_normal();
  const std::vector<double> th{1.0};
  const auto e = empirical_cf(x, th);
  CHECK(std::abs(e[0].estimate.real() - std::exp(-0.5)) <= 4.0 / std::sqrt(1e5));
  CHECK(std::abs(e[0].estimate.imag()) <= 4.0 / std::sqrt(1e5));
  const std::vector<double> grid{0.2, 0.5, 1.0, 2.0};
  const auto est = empirical_cf(x, grid);
  const auto gauss = [](double t) { return std::complex<double>(std::exp(-0.5 * t * t)); };
  CHECK(cf_compare(est, gauss).pass);
  const double shift = 10.0 / std::sqrt(1e5);
  const auto bad = cf_compare(est, [&](double t) { return gauss(t) + (t == 1.0 ? shift : 0.0); });
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.worst.has_value());
  CHECK(bad.points[*bad.worst].theta == 1.0);
  CHECK_FALSE(bad.points[2].pass);
  CHECK(bad.points[0].pass);
  const auto empty = cf_compare(std::vector<CFEstimate>{}, gauss);
  CHECK(empty.pass);
  CHECK_FALSE(empty.warning.empty());
}

TEST_CASE("Kolmogorov distribution") {
  CHECK(kolmogorov_cdf(0.0) == 0.0);
  CHECK(kolmogorov_cdf(1.3580986393225505) == doctest::Approx(0.95).epsilon(1e-9));
  CHECK(kolmogorov_critical_value(0.01) == doctest::Approx(1.6276236115189502).epsilon(1e-9));
  CHECK(kolmogorov_cdf(0.1) == doctest::Approx(6.609305242245699e-53).epsilon(1e-6));
  double prev = 0.0;
  for (double x = 0.05; x < 3.0; x += 0.05) {
    CHECK(kolmogorov_cdf(x) >= prev);
    prev = kolmogorov_cdf(x);
  }
}

TEST_CASE("KS test") {
  RandomStream s(21);
  std::vector<double> u(10000);
  for (double& v : u) v = s.uniform_open();
  const auto uni = ks_test(u, [](double x) { return std::clamp(x, 0.0, 1.0); }, 0.01);
  CHECK(uni.pass);
  CHECK(uni.samples == 10000);
  std::vector<double> z(10000);
  for (double& v : z) v = s.standard_normal() + 0.5;
  CHECK_FALSE(ks_test(z, [](double x) { return normal_cdf(x); }, 0.01).pass);
  CHECK(ks_test({3.0}, [](double x) { return normal_cdf(x); }, 0.01).pass);
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.0, 1.0, 4.0) == 0.5);
  CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("streams are reproducible and distinct") {
  auto a = derive_stream(9, StreamPurpose::Action, 0);
  auto b = derive_stream(9, StreamPurpose::Action, 0);
  auto c = derive_stream(9, StreamPurpose::Action, 1);
  auto d = derive_stream(9, StreamPurpose::Integral, 0);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
  std::vector<int> hits(10, 0);
  for_each_chunk(10 * kPathsPerChunk + 5, 4, [&](std::size_t chunk, std::size_t first, std::size_t n) {
    CHECK(first == chunk * kPathsPerChunk);
    if (chunk < 10) CHECK(n == kPathsPerChunk);
    if (chunk < 10) hits[chunk]++;
  });
  for (int h : hits) CHECK(h == 1);
}
