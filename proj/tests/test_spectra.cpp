#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "test_util.hpp"

using namespace cheeger;
using Catch::Matchers::WithinAbs;
using std::numbers::pi;

TEST_CASE("real spectra of example chains", "[spectra]") {
  const auto swap = real_spectrum(testutil::two_point());
  REQUIRE(swap.size() == 2);
  CHECK_THAT(swap[0], WithinAbs(1.0, 1e-12));
  CHECK_THAT(swap[1], WithinAbs(-1.0, 1e-12));

  const auto c5 = real_spectrum(testutil::cycle(5));
  std::vector<double> expected;
  for (int k = 0; k < 5; ++k) expected.push_back(std::cos(2 * pi * k / 5));
  std::sort(expected.begin(), expected.end(), std::greater<>());
  for (std::size_t i = 0; i < 5; ++i) CHECK_THAT(c5[i], WithinAbs(expected[i], 1e-12));
  CHECK_THAT(c5[1], WithinAbs(0.309017, 1e-6));

  const auto lazy3 = real_spectrum(lazify(testutil::cycle(3)));
  CHECK_THAT(lazy3[0], WithinAbs(1.0, 1e-12));
  CHECK_THAT(lazy3[1], WithinAbs(0.25, 1e-12));
  CHECK_THAT(lazy3[2], WithinAbs(0.25, 1e-12));
  const auto mult = multiplicities(lazy3);
  REQUIRE(mult.size() == 2);
  CHECK(mult[1].second == 2);
}

TEST_CASE("real_spectrum rejects non-reversible kernels", "[spectra]") {
  try {
    real_spectrum(testutil::rotation(3));
    FAIL("expected NotReversible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotReversible);
  }
  CHECK_THROWS_AS(lambda_max(testutil::rotation(4)), Error);
}

TEST_CASE("spectral gap", "[spectra]") {
  CHECK_THAT(spectral_gap(testutil::two_point()), WithinAbs(2.0, 1e-12));
  for (std::size_t n = 3; n <= 9; ++n) {
    CHECK_THAT(spectral_gap(testutil::cycle(n)), WithinAbs(1.0 - std::cos(2 * pi / n), 1e-12));
  }
  CHECK_THAT(spectral_gap(testutil::cycle(4)), WithinAbs(1.0, 1e-12));
  CHECK_THAT(spectral_gap(testutil::rotation(3)), WithinAbs(1.5, 1e-12));
}

TEST_CASE("lambda_max and lambda_star", "[spectra]") {
  CHECK_THAT(lambda_max(testutil::two_point()), WithinAbs(1.0, 1e-12));
  CHECK_THAT(lambda_max(testutil::cycle(5)), WithinAbs(std::cos(pi / 5), 1e-12));
  CHECK_THAT(lambda_max(lazify(testutil::cycle(3))), WithinAbs(0.25, 1e-12));

  CHECK_THAT(lambda_star(testutil::rotation(3)), WithinAbs(1.0, 1e-10));
  CHECK_THAT(lambda_star(testutil::two_point()), WithinAbs(1.0, 1e-12));
}

TEST_CASE("spectra agree with a general eigensolver", "[spectra][property]") {
  for (const auto& K : testutil::random_kernels(31, 40)) {
    const auto rows = testutil::rows_of(K);
    const auto s = spectrum(K);
    CHECK(s.reversible == is_reversible(K));
    CHECK_THAT(std::abs(s.eigenvalues.front() - 1.0), WithinAbs(0.0, 1e-9));
    for (const auto& z : s.eigenvalues) CHECK(std::abs(z) <= 1.0 + 1e-9);
    CHECK_THAT(s.gap, WithinAbs(oracle::gap(rows), 1e-9));
    CHECK_THAT(s.lambda_star, WithinAbs(oracle::lambda_star(rows), 1e-9));
    if (s.reversible) {
      CHECK_THAT(s.lambda_max, WithinAbs(s.lambda_star, 1e-9));
      for (const auto& z : s.eigenvalues) CHECK(z.imag() == 0.0);
      CHECK_THAT(1.0 - s.gap, WithinAbs(real_spectrum(K)[1], 1e-9));
      CHECK_THAT(spectral_gap(K), WithinAbs(spectral_gap(additive_symmetrization(K)), 1e-9));
    } else {
      CHECK(std::isnan(s.lambda_max));
    }
    CHECK_THAT(spectral_gap(K), WithinAbs(2.0 * spectral_gap(lazify(K)), 1e-9));
  }
}

TEST_CASE("mixing sandwich for reversible kernels", "[spectra][property]") {
  std::vector<MarkovKernel> kernels{testutil::cycle(5), testutil::lazy_cycle(6), testutil::two_point()};
  for (const auto& K : testutil::random_kernels(37, 20)) {
    if (is_reversible(K)) kernels.push_back(K);
  }
  for (const auto& K : kernels) {
    const double gap = spectral_gap(K);
    const double lmax = lambda_max(K);
    const double pmin = K.pi().minCoeff();
    const auto tv = max_tv_distances(K, 30);
    for (std::size_t t = 0; t <= 30; ++t) {
      const double T = static_cast<double>(t);
      const double lower = 0.5 * std::pow(lmax, T);
      CHECK(0.5 * std::pow(std::abs(1.0 - gap), T) <= lower + 1e-9);
      CHECK(lower <= tv[t] + 1e-9);
      CHECK(tv[t] <= lower / pmin + 1e-9);
    }
  }
}
