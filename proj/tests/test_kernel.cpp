#include <catch_amalgamated.hpp>

#include <cmath>

#include "test_util.hpp"

using namespace cheeger;
using Catch::Matchers::WithinAbs;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidInput;
}

double max_entry_diff(const MarkovKernel& a, const MarkovKernel& b) { return (a.P() - b.P()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("make_kernel solves for pi", "[kernel]") {
  const auto swap = testutil::from_rows({{0, 1}, {1, 0}});
  CHECK_THAT(swap.pi(0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(swap.pi(1), WithinAbs(0.5, 1e-15));

  const auto c5 = testutil::cycle(5);
  for (std::size_t x = 0; x < 5; ++x) CHECK_THAT(c5.pi(x), WithinAbs(0.2, 1e-14));
}

TEST_CASE("make_kernel rejects invalid matrices", "[kernel]") {
  CHECK(code_of([] { testutil::from_rows({{1, 0}, {0, 1}}); }) == ErrorCode::NotIrreducible);
  CHECK(code_of([] { testutil::from_rows({{0.5, 0.6}, {1, 0}}); }) == ErrorCode::NotStochastic);
  CHECK(code_of([] { testutil::from_rows({{1.5, -0.5}, {1, 0}}); }) == ErrorCode::NegativeEntry);
  CHECK(code_of([] { make_kernel(oracle::Matrix{{0, 1}, {1, 0}}, {"only-one"}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("row sums are accepted within the input tolerance", "[kernel]") {
  CHECK_NOTHROW(testutil::from_rows({{0.5 + 5e-10, 0.5}, {1, 0}}));
  CHECK_THROWS_AS(testutil::from_rows({{0.5 + 5e-9, 0.5}, {1, 0}}), Error);
}

TEST_CASE("stationary residual matches an independent power iteration", "[kernel][property]") {
  for (const auto& K : testutil::random_kernels(11, 40)) {
    const Eigen::RowVectorXd pi = K.pi().transpose();
    CHECK((pi * K.P() - pi).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK_THAT(K.pi().sum(), WithinAbs(1.0, 1e-14));
    const auto ref = oracle::stationary(testutil::rows_of(K));
    for (std::size_t x = 0; x < K.n(); ++x) CHECK_THAT(K.pi(x), WithinAbs(ref[x], 1e-10));
  }
}

TEST_CASE("time reversal", "[kernel]") {
  const auto swap = testutil::two_point();
  CHECK(max_entry_diff(time_reversal(swap), swap) == 0.0);

  const auto rot = testutil::rotation(3);
  const auto rev = time_reversal(rot);
  for (std::size_t i = 0; i < 3; ++i) CHECK_THAT(rev(i, (i + 2) % 3), WithinAbs(1.0, 1e-12));

  for (const auto& K : testutil::random_kernels(3, 30)) {
    const auto twice = time_reversal(time_reversal(K));
    CHECK(max_entry_diff(twice, K) <= 1e-12);
    CHECK((time_reversal(K).pi() - K.pi()).cwiseAbs().maxCoeff() <= 1e-12);
    if (is_reversible(K)) CHECK(max_entry_diff(time_reversal(K), K) <= 1e-12);
  }
}

TEST_CASE("additive symmetrization", "[kernel]") {
  const auto c3 = additive_symmetrization(testutil::rotation(3));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK_THAT(c3(i, (i + 1) % 3), WithinAbs(0.5, 1e-12));
    CHECK_THAT(c3(i, (i + 2) % 3), WithinAbs(0.5, 1e-12));
  }
  CHECK(is_reversible(c3));
  const auto swap = testutil::two_point();
  CHECK(max_entry_diff(additive_symmetrization(swap), swap) <= 1e-15);

  for (const auto& K : testutil::random_kernels(5, 30)) {
    const auto S = additive_symmetrization(K);
    CHECK(is_reversible(S));
    CHECK(max_entry_diff(S, make_kernel(Eigen::MatrixXd(0.5 * (K.P() + time_reversal(K).P())), {})) <= 1e-12);
  }
}

TEST_CASE("lazify builds the half-lazy symmetrization", "[kernel]") {
  const auto swap = lazify(testutil::two_point());
  CHECK_THAT(swap(0, 0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(swap(0, 1), WithinAbs(0.5, 1e-15));

  const auto c3 = lazify(testutil::cycle(3));
  CHECK_THAT(c3(0, 0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(c3(0, 1), WithinAbs(0.25, 1e-15));
  CHECK_THAT(c3(0, 2), WithinAbs(0.25, 1e-15));
  CHECK(is_lazy(c3));

  const auto lazy = lazify(testutil::lazy_cycle(4));
  for (std::size_t x = 0; x < 4; ++x) CHECK(lazy(x, x) >= 0.75 - 1e-15);

  for (const auto& K : testutil::random_kernels(8, 20, 8)) {
    const auto L = lazify(K);
    const auto S = additive_symmetrization(K);
    CHECK(is_reversible(L));
    const Mask V = full_mask(K.n());
    for (Mask A = 1; A < V; ++A) {
      CHECK_THAT(ergodic_flow(L, A, V & ~A), WithinAbs(0.5 * ergodic_flow(S, A, V & ~A), 1e-12));
    }
  }
}

TEST_CASE("ergodic flow", "[kernel]") {
  const auto c5 = testutil::cycle(5);
  for (std::size_t start = 0; start < 5; ++start) {
    for (std::size_t len = 1; len < 5; ++len) {
      Mask A = 0;
      for (std::size_t k = 0; k < len; ++k) A |= Mask{1} << ((start + k) % 5);
      CHECK_THAT(ergodic_flow(c5, A, full_mask(5) & ~A), WithinAbs(0.2, 1e-15));
    }
  }
  CHECK_THAT(ergodic_flow(c5, full_mask(5), full_mask(5)), WithinAbs(1.0, 1e-15));
  CHECK_THAT(ergodic_flow(testutil::cycle(4), 0b0011, 0b1100), WithinAbs(0.25, 1e-15));
}

TEST_CASE("flow decomposition over every subset", "[kernel][property]") {
  for (const auto& K : testutil::random_kernels(13, 10, 10)) {
    const Mask V = full_mask(K.n());
    const auto rows = testutil::rows_of(K);
    const std::vector<double> pi(K.pi().data(), K.pi().data() + K.n());
    for (Mask A = 1; A < V; ++A) {
      CHECK_THAT(ergodic_flow(K, A, A) + ergodic_flow(K, A, V & ~A), WithinAbs(set_measure(K, A), 1e-12));
      CHECK_THAT(ergodic_flow(K, A, V), WithinAbs(set_measure(K, A), 1e-12));
      CHECK_THAT(ergodic_flow(K, A, V & ~A), WithinAbs(oracle::flow(rows, pi, A, V & ~A), 1e-12));
      if (is_reversible(K)) {
        CHECK_THAT(ergodic_flow(K, A, V & ~A), WithinAbs(ergodic_flow(K, V & ~A, A), 1e-12));
      }
    }
  }
}

TEST_CASE("minimum transition probability", "[kernel]") {
  CHECK(min_transition_prob(testutil::cycle(7), false) == 0.5);
  CHECK(min_transition_prob(lazify(testutil::cycle(3)), true) == 0.25);
  CHECK(min_transition_prob(testutil::two_point(), false) == 1.0);
  CHECK(min_transition_prob(testutil::lazy_cycle(5), false) == 0.25);
  CHECK(min_transition_prob(testutil::lazy_cycle(5), true) == 0.25);
}

TEST_CASE("total variation distance", "[kernel]") {
  const auto c5 = testutil::cycle(5);
  CHECK_THAT(tv_distance(c5, 2, 0), WithinAbs(0.8, 1e-15));

  const auto swap = testutil::two_point();
  for (std::size_t t = 0; t < 10; ++t) CHECK_THAT(tv_distance(swap, 0, t), WithinAbs(0.5, 1e-15));

  const auto lazy = lazify(testutil::cycle(3));
  double previous = 1.0;
  for (std::size_t t = 0; t <= 40; ++t) {
    const double tv = tv_distance(lazy, 0, t);
    CHECK(tv <= previous + 1e-15);
    previous = tv;
  }
  CHECK(previous < 1e-12);

  for (const auto& K : testutil::random_kernels(17, 10)) {
    const auto ref = oracle::max_tv(testutil::rows_of(K), 12);
    const auto got = max_tv_distances(K, 12);
    for (std::size_t t = 0; t <= 12; ++t) CHECK_THAT(got[t], WithinAbs(ref[t], 1e-9));
  }
}
