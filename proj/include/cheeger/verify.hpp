#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cheeger/bounds.hpp"
#include "cheeger/chains.hpp"
#include "cheeger/congestion.hpp"
#include "cheeger/evolving.hpp"
#include "cheeger/expansion.hpp"
#include "cheeger/kernel.hpp"
#include "cheeger/kernel_io.hpp"
#include "cheeger/setops.hpp"
#include "cheeger/shape.hpp"
#include "cheeger/step_function.hpp"

namespace cheeger {

struct VerifyConfig {
  std::uint64_t seed = 7;
  /// Random kernels (or fixtures) per suite.
  std::size_t count = 100;
  /// Largest random kernel size.
  std::size_t n_max = 8;
  std::size_t workers = 1;
};

struct SuiteResult {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  /// Offending kernel seed and set of the first failure.
  std::string first_failure;

  bool ok() const { return failed == 0; }
  void record(bool pass, const std::function<std::string()>& describe) {
    if (pass) {
      ++passed;
    } else {
      if (failed++ == 0) first_failure = describe();
    }
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"martingale", "flow",     "psi",
                                              "lemma41",    "appendix", "soundness"};
  return names;
}

/// A seeded fixture kernel together with the text that reproduces it.
struct Fixture {
  std::string tag;
  MarkovKernel kernel;
};

namespace detail {

inline std::string describe_spec(const ChainSpec& s) {
  std::string out = to_string(s.family) + " n=" + std::to_string(s.states()) +
                    " seed=" + std::to_string(s.seed);
  if (s.laziness) out += " laziness=" + format_double(*s.laziness);
  return out;
}

/// Reversible and general random kernels with 3 <= n <= n_max, alternating,
/// with sizes and seeds derived from the base seed.
inline std::vector<Fixture> random_fixtures(const VerifyConfig& c, bool lazy_only = false) {
  std::vector<Fixture> out;
  std::mt19937_64 rng(c.seed);
  const std::size_t hi = std::max<std::size_t>(3, c.n_max);
  std::uniform_int_distribution<std::size_t> size(3, hi);
  for (std::size_t i = 0; i < c.count; ++i) {
    ChainSpec s;
    s.family = i % 2 == 0 ? ChainFamily::RandomReversible : ChainFamily::RandomGeneral;
    s.n = size(rng);
    s.seed = rng();
    if (lazy_only) s.laziness = 0.5;
    out.push_back({describe_spec(s), generate(s)});
  }
  return out;
}

inline std::string where(const Fixture& f, Mask A) {
  return f.tag + " A=" + format_mask(A);
}

}  // namespace detail

/// E[pi(A_u)] = pi(A) for every proper A.
inline SuiteResult verify_martingale(const VerifyConfig& c) {
  SuiteResult r{"martingale", 0, 0, {}};
  VerifyConfig small = c;
  small.n_max = std::min<std::size_t>(c.n_max, 10);
  for (const auto& f : detail::random_fixtures(small)) {
    for (const VertexSet& A : enumerate_proper_subsets(f.kernel, false)) {
      const double mean = profile(f.kernel, A).measure.integral();
      r.record(std::abs(mean - A.measure) <= kIdentityTolerance,
               [&] { return detail::where(f, A.bits) + " E[pi(A_u)]=" + format_double(mean); });
    }
  }
  return r;
}

/// For lazy kernels both areas around pi(A) equal Q(A,A^c).
inline SuiteResult verify_flow(const VerifyConfig& c) {
  SuiteResult r{"flow", 0, 0, {}};
  VerifyConfig small = c;
  small.n_max = std::min<std::size_t>(c.n_max, 10);
  for (const auto& f : detail::random_fixtures(small, true)) {
    for (const VertexSet& A : enumerate_proper_subsets(f.kernel, false)) {
      const double q = ergodic_flow(f.kernel, A, complement(f.kernel, A));
      const FlowAreas a = ergodic_flow_identity(f.kernel, A);
      const bool ok = std::abs(a.upper_area - q) <= kIdentityTolerance &&
                      std::abs(a.lower_area - q) <= kIdentityTolerance;
      r.record(ok, [&] { return detail::where(f, A.bits) + " Q=" + format_double(q); });
    }
  }
  return r;
}

/// Psi(A) from the profile integral equals the min-flow formulation.
inline SuiteResult verify_psi(const VerifyConfig& c) {
  SuiteResult r{"psi", 0, 0, {}};
  for (const auto& f : detail::random_fixtures(c)) {
    for (const VertexSet& A : enumerate_proper_subsets(f.kernel, false)) {
      const double a = psi(f.kernel, A), b = psi_minflow(f.kernel, A);
      r.record(std::abs(a - b) <= kIdentityTolerance, [&] {
        return detail::where(f, A.bits) + " psi=" + format_double(a) + " minflow=" + format_double(b);
      });
    }
  }
  return r;
}

namespace detail {

/// Random non-negative concave function on [0,1].
inline ShapeFunction random_concave(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (rng() % 4) {
    case 0: return shapes::sqrt_a();
    case 1: return shapes::sqrt_a_one_minus_a();
    case 2: return shapes::sin_pi_a();
    default: {
      // Minimum of affine pieces, each non-negative on [0,1].
      std::vector<std::pair<double, double>> lines;
      const std::size_t k = 1 + rng() % 4;
      for (std::size_t i = 0; i < k; ++i) {
        const double at0 = unit(rng), at1 = unit(rng);
        lines.emplace_back(at0, at1 - at0);
      }
      return shapes::custom(
          "min-affine",
          [lines](double a) {
            double v = std::numeric_limits<double>::infinity();
            for (const auto& [c0, slope] : lines) v = std::min(v, c0 + slope * a);
            return v;
          },
          false, true);
    }
  }
}

/// Random non-increasing step function with values in [0,1].
inline StepFunction random_decreasing(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t pieces = 1 + rng() % 6;
  std::vector<double> cuts(pieces - 1), values(pieces);
  for (double& x : cuts) x = unit(rng);
  for (double& v : values) v = unit(rng);
  std::sort(cuts.begin(), cuts.end());
  std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < pieces; ++i) {
    if (cuts[i] > (out.empty() ? 0.0 : out.back().first)) out.emplace_back(cuts[i], values[i]);
  }
  out.emplace_back(1.0, values.back());
  return StepFunction::from_pieces(out);
}

/// Block averages of g over a random partition, optionally blended toward
/// the constant mean: non-increasing, same integral, running integrals below g's.
inline StepFunction random_spread(const StepFunction& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> cuts(rng() % 4);
  for (double& x : cuts) x = unit(rng);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [](double x) { return x <= 0.0 || x >= 1.0; }),
             cuts.end());
  cuts.push_back(1.0);
  const double blend = rng() % 3 == 0 ? unit(rng) : 0.0;
  const double mean = g.integral();
  std::vector<std::pair<double, double>> out;
  double lo = 0.0;
  for (double hi : cuts) {
    const double avg = g.integrate_between(lo, hi, [](double v) { return v; }) / (hi - lo);
    out.emplace_back(hi, (1.0 - blend) * avg + blend * mean);
    lo = hi;
  }
  return StepFunction::from_pieces(out);
}

}  // namespace detail

/// Rearrangement comparison on random fixtures and on true profiles against
/// their worst-case profiles.
inline SuiteResult verify_lemma41(const VerifyConfig& c) {
  SuiteResult r{"lemma41", 0, 0, {}};
  std::mt19937_64 rng(c.seed);
  for (std::size_t i = 0; i < c.count; ++i) {
    const std::uint64_t fixture_seed = rng();
    std::mt19937_64 local(fixture_seed);
    const ShapeFunction f = detail::random_concave(local);
    const StepFunction g = detail::random_decreasing(local);
    const StepFunction g_hat = detail::random_spread(g, local);
    std::string detail_text;
    bool ok = false;
    try {
      const auto v = check_rearrangement(f, g, g_hat);
      ok = v.holds;
      detail_text = " lhs=" + format_double(v.lhs) + " rhs=" + format_double(v.rhs);
    } catch (const Error& e) {
      detail_text = std::string(" precondition: ") + e.what();
    }
    r.record(ok, [&] { return "fixture seed=" + std::to_string(fixture_seed) + " f=" + f.name + detail_text; });
  }

  VerifyConfig small = c;
  small.count = std::max<std::size_t>(2, c.count / 10);
  small.n_max = std::min<std::size_t>(c.n_max, 7);
  for (bool lazy : {true, false}) {
    for (const auto& fx : detail::random_fixtures(small, lazy)) {
      const MarkovKernel& K = fx.kernel;
      const bool reversible = is_reversible(K);
      const double p0 = min_transition_prob(K, false);
      for (const VertexSet& A : enumerate_proper_subsets(K, false)) {
        const StepProfile p = profile(K, A);
        const Boundaries b = boundaries(K, A);
        std::vector<std::pair<WorstCase, WorstProfileParams>> cases;
        if (lazy) {
          cases.push_back({WorstCase::LazyEdge, {A.measure, ergodic_flow(K, A, complement(K, A))}});
          if (reversible) {
            cases.push_back({WorstCase::LazyInBoundary, {A.measure, 0.0, 0.5, b.inner.measure, p0}});
            cases.push_back({WorstCase::LazyOutBoundary, {A.measure, 0.0, 0.5, b.outer.measure, p0}});
          }
        } else {
          cases.push_back({WorstCase::NonlazyTwostep, {A.measure, psi(p), crossing_point(p)}});
        }
        for (const auto& [kind, params] : cases) {
          for (const ShapeFunction& f : {shapes::sqrt_a_one_minus_a(), shapes::sin_pi_a()}) {
            bool ok = false;
            std::string why;
            try {
              ok = check_rearrangement(f, p.measure, worst_profile(kind, params)).holds;
            } catch (const Error& e) {
              why = e.what();
            }
            r.record(ok, [&] {
              return detail::where(fx, A.bits) + " case=" + std::to_string(static_cast<int>(kind)) +
                     " " + why;
            });
          }
        }
      }
    }
  }
  return r;
}

/// sqrt(1-(X-Y)^2) >= sqrt(XY) + sqrt((1-X)(1-Y)) on a 201 x 201 grid.
inline SuiteResult verify_appendix(const VerifyConfig&) {
  SuiteResult r{"appendix", 0, 0, {}};
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      const double X = i / 200.0, Y = j / 200.0;
      const double slack = appendix_slack(X, Y);
      r.record(slack >= -kIdentityTolerance, [&] {
        return "X=" + format_double(X) + " Y=" + format_double(Y) + " slack=" + format_double(slack);
      });
    }
  }
  return r;
}

/// Every bound below its exact target, the classical upper bound, and the
/// reversible vertex bound at least the earlier baseline.
inline SuiteResult verify_soundness(const VerifyConfig& c) {
  SuiteResult r{"soundness", 0, 0, {}};
  for (const auto& f : detail::random_fixtures(c)) {
    const BoundReport report = full_report(f.kernel, c.workers);
    for (const auto& e : report.entries) {
      const bool ok = !e.error && e.valid && e.upper_valid;
      r.record(ok, [&] {
        return f.tag + " bound=" + e.name + " value=" + format_double(e.value) +
               " exact=" + format_double(e.exact) + (e.error ? " error=" + *e.error : "") +
               (e.witness ? " A=" + format_mask(*e.witness) : "");
      });
    }
    if (report.reversible) {
      const auto* fresh = report.find("vertex_reversible");
      const auto* base = report.find("stoyanov");
      const auto* fresh_weak = report.find("vertex_reversible_weak");
      const auto* base_weak = report.find("stoyanov_weak");
      const bool ok = fresh && base && fresh_weak && base_weak &&
                      fresh->value >= base->value - kIdentityTolerance &&
                      fresh_weak->value >= base_weak->value - kIdentityTolerance;
      r.record(ok, [&] { return f.tag + " reversible vertex bound below baseline"; });
    }
  }
  return r;
}

inline SuiteResult run_suite(const std::string& name, const VerifyConfig& c) {
  if (name == "martingale") return verify_martingale(c);
  if (name == "flow") return verify_flow(c);
  if (name == "psi") return verify_psi(c);
  if (name == "lemma41") return verify_lemma41(c);
  if (name == "appendix") return verify_appendix(c);
  if (name == "soundness") return verify_soundness(c);
  throw Error(ErrorCode::InvalidInput, "unknown suite '" + name + "'");
}

}  // namespace cheeger
