#include <catch_amalgamated.hpp>

#include <set>

#include "test_util.hpp"

using namespace cheeger;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<Mask> collect(const SubsetStream& s) {
  std::vector<Mask> out;
  for (const VertexSet& A : s) out.push_back(A.bits);
  return out;
}

}  // namespace

TEST_CASE("proper subsets of small chains", "[setops]") {
  CHECK(collect(enumerate_proper_subsets(testutil::two_point(), false)) == std::vector<Mask>{0b01, 0b10});
  CHECK(collect(enumerate_proper_subsets(testutil::cycle(3), true)) == std::vector<Mask>{0b001, 0b010, 0b100});
  CHECK(collect(enumerate_proper_subsets(testutil::cycle(4), true)).size() == 10);
}

TEST_CASE("enumeration is exhaustive and ascending", "[setops][property]") {
  for (const auto& K : testutil::random_kernels(21, 12, 10)) {
    const auto all = collect(enumerate_proper_subsets(K, false));
    CHECK(all.size() == (std::size_t{1} << K.n()) - 2);
    CHECK(std::is_sorted(all.begin(), all.end()));

    std::size_t expected = 0;
    for (Mask A = 1; A < full_mask(K.n()); ++A) {
      if (oracle::measure(oracle::stationary(testutil::rows_of(K)), A) <= 0.5 + 1e-12) ++expected;
    }
    const auto half = collect(enumerate_proper_subsets(K, true));
    CHECK(half.size() == expected);
    CHECK(enumerate_proper_subsets(K, true).count() == expected);
  }
}

TEST_CASE("split streams partition the enumeration", "[setops]") {
  const auto K = testutil::cycle(9);
  const auto whole = enumerate_proper_subsets(K, true);
  for (std::size_t parts : {1u, 2u, 3u, 7u, 64u}) {
    std::vector<Mask> joined;
    for (const auto& piece : whole.split(parts)) {
      const auto got = collect(piece);
      joined.insert(joined.end(), got.begin(), got.end());
    }
    CHECK(joined == collect(whole));
  }
}

TEST_CASE("subsets with a given measure", "[setops]") {
  const auto c5 = testutil::cycle(5);
  const auto triples = collect(subsets_with_measure(c5, 0.6, 1e-12));
  CHECK(triples.size() == 10);
  for (Mask b : triples) CHECK(cardinality(b) == 3);

  CHECK(collect(subsets_with_measure(c5, 1.0, 1e-12)) == std::vector<Mask>{full_mask(5)});

  const auto K = testutil::from_rows({{0.5, 0.5, 0.0}, {0.3, 0.0, 0.7}, {0.0, 0.9, 0.1}});
  CHECK(collect(subsets_with_measure(K, 0.123456, 1e-12)).empty());
}

TEST_CASE("complement measures sum to one", "[setops][property]") {
  for (const auto& K : testutil::random_kernels(23, 10, 10)) {
    for (const VertexSet& A : enumerate_proper_subsets(K, false)) {
      CHECK_THAT(A.measure + complement(K, A).measure, WithinAbs(1.0, 1e-14));
      CHECK_THAT(A.measure, WithinAbs(set_measure(K, A.bits), 1e-14));
    }
    CHECK(set_measure(K, full_mask(K.n())) == 1.0);
  }
}

TEST_CASE("make_set validates members", "[setops]") {
  const auto K = testutil::cycle(4);
  CHECK(make_set(K, {0, 2}).bits == 0b0101);
  CHECK_THROWS_AS(make_set(K, Mask{0b10000}), Error);
  CHECK(is_proper(K, make_set(K, {1})));
  CHECK_FALSE(is_proper(K, make_set(K, Mask{0})));
  CHECK_FALSE(is_proper(K, make_set(K, full_mask(4))));
}

TEST_CASE("enumeration guard", "[setops]") {
  const auto big = testutil::cycle(25);
  try {
    enumerate_proper_subsets(big, true);
    FAIL("expected TooManyStates");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyStates);
  }
  CHECK_THROWS_AS(subsets_with_measure(big, 0.5, 1e-12), Error);
}

TEST_CASE("parallel sweeps agree with serial sweeps", "[setops]") {
  for (const auto& K : testutil::random_kernels(29, 6, 9)) {
    auto ratio = [&](const VertexSet& A) -> std::optional<double> {
      return ergodic_flow(K, A.bits, full_mask(K.n()) & ~A.bits) / A.measure;
    };
    const auto serial = sweep(enumerate_proper_subsets(K, true), Sense::Minimize, ratio, 1);
    const auto parallel = sweep(enumerate_proper_subsets(K, true), Sense::Minimize, ratio, 4);
    CHECK(serial.value == parallel.value);
    CHECK(serial.witness == parallel.witness);
  }
}
