#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "test_util.hpp"

using namespace cheeger;
using Catch::Matchers::WithinAbs;

namespace {

double sqrt_var(double a) { return std::sqrt(std::max(0.0, a * (1.0 - a))); }

}  // namespace

TEST_CASE("profiles of example sets", "[evolving]") {
  const auto swap = testutil::two_point();
  const auto p2 = profile(swap, make_set(swap, {0}));
  CHECK(p2.measure.pieces() == 1);
  CHECK_THAT(p2.measure.at(0.3), WithinAbs(0.5, 1e-15));
  CHECK(p2.set_at(0.9) == 0b10);

  const auto c3 = testutil::cycle(3);
  const auto p3 = profile(c3, make_set(c3, {0}));
  CHECK_THAT(p3.measure.at(0.25), WithinAbs(2.0 / 3.0, 1e-15));
  CHECK_THAT(p3.measure.at(0.5), WithinAbs(2.0 / 3.0, 1e-15));
  CHECK_THAT(p3.measure.at(0.75), WithinAbs(0.0, 1e-15));
  CHECK(p3.set_at(0.4) == 0b110);
  CHECK(p3.set_at(0.6) == 0);
  CHECK_THAT(p3.thresholds[1], WithinAbs(0.5, 1e-15));
  CHECK(p3.thresholds[0] == 0.0);
}

TEST_CASE("integrating shape functions over a profile", "[evolving]") {
  const auto c3 = testutil::cycle(3);
  const auto p = profile(c3, make_set(c3, {0}));
  CHECK_THAT(integrate_f(p, [](double a) { return a; }), WithinAbs(1.0 / 3.0, 1e-15));
  CHECK_THAT(integrate_f(p, sqrt_var), WithinAbs(std::sqrt(2.0) / 6.0, 1e-15));
  CHECK_THAT(integrate_f(p, [](double) { return 1.0; }), WithinAbs(1.0, 1e-15));
}

TEST_CASE("martingale identity on every proper set", "[evolving][property]") {
  auto kernels = testutil::random_kernels(41, 16, 10);
  kernels.push_back(testutil::cycle(7));
  kernels.push_back(testutil::rotation(5));
  for (const auto& K : kernels) {
    const auto rows = testutil::rows_of(K);
    const std::vector<double> pi(K.pi().data(), K.pi().data() + K.n());
    for (const VertexSet& A : enumerate_proper_subsets(K, false)) {
      const auto p = profile(K, A);
      CHECK_THAT(integrate_f(p, [](double a) { return a; }), WithinAbs(A.measure, 1e-12));
      CHECK(p.measure.non_increasing());
      for (double t : p.thresholds) CHECK((t >= 0.0 && t <= 1.0));
      CHECK_THAT(integrate_f(p, sqrt_var), WithinAbs(oracle::integrate_profile(rows, pi, A.bits, sqrt_var), 1e-12));
    }
  }
}

TEST_CASE("lazy flow identity", "[evolving]") {
  const auto lazy3 = lazify(testutil::cycle(3));
  const auto a3 = ergodic_flow_identity(lazy3, make_set(lazy3, {0}));
  CHECK_THAT(a3.upper_area, WithinAbs(1.0 / 6.0, 1e-15));
  CHECK_THAT(a3.lower_area, WithinAbs(1.0 / 6.0, 1e-15));

  const auto lazy2 = lazify(testutil::two_point());
  const auto a2 = ergodic_flow_identity(lazy2, make_set(lazy2, {0}));
  CHECK_THAT(a2.upper_area, WithinAbs(0.25, 1e-15));
  CHECK_THAT(a2.lower_area, WithinAbs(0.25, 1e-15));

  try {
    ergodic_flow_identity(testutil::cycle(3), make_set(testutil::cycle(3), {0}));
    FAIL("expected NotLazy");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotLazy);
  }

  for (const auto& K : testutil::random_kernels(43, 12, 10, true)) {
    const Mask V = full_mask(K.n());
    for (const VertexSet& A : enumerate_proper_subsets(K, false)) {
      const double q = ergodic_flow(K, A.bits, V & ~A.bits);
      const auto areas = ergodic_flow_identity(K, A);
      CHECK_THAT(areas.upper_area, WithinAbs(q, 1e-12));
      CHECK_THAT(areas.lower_area, WithinAbs(q, 1e-12));
      CHECK(areas.upper_area > 0.0);
      const auto p = profile(K, A);
      CHECK((p.set_at(0.5) & A.bits) == A.bits);
      CHECK((p.set_at(0.5 + 1e-9) & ~A.bits) == 0);
      CHECK_THAT(psi(K, A), WithinAbs(q, 1e-12));
      CHECK_THAT(crossing_point(p), WithinAbs(0.5, 1e-12));
    }
  }
}

TEST_CASE("sample_step follows the profile", "[evolving]") {
  const auto c3 = testutil::cycle(3);
  const auto A = make_set(c3, {0});
  std::mt19937_64 rng(99);
  std::size_t up = 0;
  double total = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const auto B = sample_step(c3, A, rng);
    CHECK((B.bits == 0b110 || B.bits == 0));
    if (B.bits == 0b110) ++up;
    total += B.measure;
  }
  const double frac = static_cast<double>(up) / draws;
  CHECK_THAT(frac, WithinAbs(0.5, 0.02));
  CHECK_THAT(total / draws, WithinAbs(1.0 / 3.0, 0.02));

  const auto V = make_set(c3, full_mask(3));
  CHECK(sample_step(c3, V, rng).bits == full_mask(3));
  CHECK(sample_step(c3, make_set(c3, Mask{0}), rng).bits == 0);
}

TEST_CASE("uniform draws lie in (0,1]", "[evolving]") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform_open_closed(rng);
    CHECK((u > 0.0 && u <= 1.0));
  }
}

TEST_CASE("Monte-Carlo mixing bound", "[evolving]") {
  const auto c5 = testutil::cycle(5);
  const auto e0 = mp_mixing_bound(c5, 0, 0, 100, 1);
  CHECK_THAT(e0.mean, WithinAbs(std::sqrt(0.2) / 0.4, 1e-15));
  CHECK(e0.std_error == 0.0);

  const auto lazy3 = lazify(testutil::cycle(3));
  const auto est = mp_mixing_bound(lazy3, 0, 5, 100000, 2718);
  CHECK(est.mean + 3 * est.std_error >= tv_distance(lazy3, 0, 5));
  CHECK(est.samples == 100000);
  CHECK(est.steps == 5);

  const auto again = mp_mixing_bound(lazy3, 0, 5, 100000, 2718);
  CHECK(again.mean == est.mean);
  const auto threaded = mp_mixing_bound_trajectory(lazy3, 0, 5, 100000, 2718, 3);
  CHECK(threaded[5].mean == est.mean);
  CHECK(threaded[5].std_error == est.std_error);
}

TEST_CASE("exact evolving-set expectation bounds total variation", "[evolving]") {
  for (std::size_t n = 3; n <= 8; ++n) {
    const auto K = testutil::lazy_cycle(n);
    const auto exact = mp_mixing_bound_exact(K, 0, 12);
    const auto tv = tv_distances(K, 0, 12);
    for (std::size_t t = 0; t <= 12; ++t) CHECK(exact[t] >= tv[t] - 1e-12);
    const auto mc = mp_mixing_bound(K, 0, 3, 20000, 3);
    CHECK_THAT(mc.mean, WithinAbs(exact[3], 5 * mc.std_error + 1e-12));
  }
}

TEST_CASE("modified ergodic flow", "[evolving]") {
  const auto c3 = testutil::cycle(3);
  CHECK_THAT(psi(c3, make_set(c3, {0})), WithinAbs(1.0 / 6.0, 1e-15));
  CHECK_THAT(psi_minflow(c3, make_set(c3, {0})), WithinAbs(1.0 / 6.0, 1e-15));

  const auto swap = testutil::two_point();
  CHECK_THAT(psi(swap, make_set(swap, {0})), WithinAbs(0.0, 1e-15));
  CHECK_THAT(psi_minflow(swap, make_set(swap, {0})), WithinAbs(0.0, 1e-15));
  CHECK(crossing_point(profile(swap, make_set(swap, {0}))) == 0.5);

  const auto lazy3 = lazify(c3);
  CHECK_THAT(psi(lazy3, make_set(lazy3, {0})), WithinAbs(1.0 / 6.0, 1e-15));
  CHECK_THAT(crossing_point(profile(c3, make_set(c3, {0}))), WithinAbs(0.5, 1e-15));
}

TEST_CASE("psi duality and crossing-point split", "[evolving][property]") {
  for (const auto& K : testutil::random_kernels(47, 30, 8)) {
    const auto rows = testutil::rows_of(K);
    const std::vector<double> pi(K.pi().data(), K.pi().data() + K.n());
    for (const VertexSet& A : enumerate_proper_subsets(K, false)) {
      const auto p = profile(K, A);
      const double value = psi(p);
      CHECK_THAT(value, WithinAbs(psi_minflow(K, A), 1e-12));
      CHECK_THAT(value, WithinAbs(oracle::psi(rows, pi, A.bits), 1e-12));
      const double w = crossing_point(p);
      const double base = A.measure;
      CHECK_THAT(p.measure.integrate_between(0.0, w, [&](double v) { return v - base; }), WithinAbs(value, 1e-12));
      CHECK_THAT(p.measure.integrate_between(w, 1.0, [&](double v) { return base - v; }), WithinAbs(value, 1e-12));
    }
  }
}

TEST_CASE("complement symmetry for symmetric integrands", "[evolving][property]") {
  const auto g = [](double a) { return std::sqrt(std::max(0.0, a * (1.0 - a))) + std::sin(3.0 * a * (1.0 - a)); };
  for (const auto& K : testutil::random_kernels(53, 20, 8)) {
    for (const VertexSet& A : enumerate_proper_subsets(K, false)) {
      const double direct = integrate_f(profile(K, A), g);
      const double comp = integrate_f(profile(K, complement(K, A)), g);
      CHECK_THAT(direct, WithinAbs(comp, 1e-12));
    }
  }
}
