#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "cheeger/bound_entry.hpp"
#include "cheeger/error.hpp"
#include "cheeger/evolving.hpp"
#include "cheeger/kernel.hpp"
#include "cheeger/setops.hpp"
#include "cheeger/shape.hpp"
#include "cheeger/spectra.hpp"
#include "cheeger/step_function.hpp"

namespace cheeger {

/// C_f(A) = integral_0^1 f(pi(A_u)) du / f(pi(A)).
inline double f_congestion_set(const MarkovKernel& K, const VertexSet& A, const ShapeFunction& f) {
  const double denominator = f(A.measure);
  if (!(denominator > 0.0)) {
    throw Error(ErrorCode::ZeroDenominator, "f(pi(A)) = 0 for A = " + format_mask(A.bits));
  }
  return integrate_f(profile(K, A), f) / denominator;
}

struct CongestionResult {
  double value = 0.0;
  VertexSet witness;
  /// True when the max ran over pi(A) <= 1/2 only (symmetric f).
  bool restricted = false;
  /// Sets skipped because f(pi(A)) = 0.
  std::size_t skipped = 0;
};

/// C_f = max_A C_f(A); restricted to pi(A) <= 1/2 when f(a) <= f(1-a) on (0,1/2).
inline CongestionResult f_congestion(const MarkovKernel& K, const ShapeFunction& f,
                                     std::size_t workers = 1) {
  const auto stream = enumerate_proper_subsets(K, f.symmetric);
  const auto r = sweep(
      stream, Sense::Maximize,
      [&](const VertexSet& A) -> std::optional<double> {
        const double denominator = f(A.measure);
        if (!(denominator > 0.0)) return std::nullopt;
        return integrate_f(profile(K, A), f) / denominator;
      },
      workers);
  if (!r.found) {
    throw Error(ErrorCode::ZeroDenominator, "f vanishes on every candidate set");
  }
  return {r.value, make_set(K, r.witness), f.symmetric, r.skipped};
}

/// 1 - C_f, a lower bound on 1 - lambda_max (reversible) or 1 - lambda_star.
inline BoundEntry generalized_cheeger_bound(const MarkovKernel& K, const ShapeFunction& f,
                                            const Spectrum& s, std::size_t workers = 1) {
  BoundEntry e;
  e.name = "generalized_cheeger[" + f.name + "]";
  e.target = s.reversible ? Target::OneMinusLambdaMax : Target::OneMinusLambdaStar;
  const auto c = f_congestion(K, f, workers);
  e.value = 1.0 - c.value;
  e.witness = c.witness.bits;
  return attach_exact(e, s);
}

inline BoundEntry generalized_cheeger_bound(const MarkovKernel& K, const ShapeFunction& f) {
  return generalized_cheeger_bound(K, f, spectrum(K));
}

struct RearrangementVerdict {
  double lhs = 0.0;  ///< integral f o g
  double rhs = 0.0;  ///< integral f o g_hat
  bool holds = false;
};

/// Checks integral f(g) <= integral f(g_hat) for concave f and non-increasing
/// g, g_hat with equal mass and running integrals of g dominating those of g_hat.
/// Precondition failures throw PreconditionViolated (a bad fixture, not a
/// counterexample).
inline RearrangementVerdict check_rearrangement(const ShapeFunction& f, const StepFunction& g,
                                                const StepFunction& g_hat) {
  constexpr double tol = kIdentityTolerance;
  if (!f.concave) throw Error(ErrorCode::PreconditionViolated, f.name + " is not flagged concave");
  for (const StepFunction* h : {&g, &g_hat}) {
    if (!h->non_increasing(tol)) {
      throw Error(ErrorCode::PreconditionViolated, "step function is not non-increasing");
    }
    if (h->min_value() < -tol || h->max_value() > 1.0 + tol) {
      throw Error(ErrorCode::PreconditionViolated, "step function leaves [0,1]");
    }
  }
  if (std::abs(g.integral() - g_hat.integral()) > tol) {
    throw Error(ErrorCode::PreconditionViolated, "integrals differ");
  }
  std::set<double> breakpoints(g.edges.begin(), g.edges.end());
  breakpoints.insert(g_hat.edges.begin(), g_hat.edges.end());
  for (double t : breakpoints) {
    if (g.running_integral(t) < g_hat.running_integral(t) - tol) {
      throw Error(ErrorCode::PreconditionViolated,
                  "running integral of g falls below g_hat at t = " + std::to_string(t));
    }
  }
  const auto clamp01 = [&](double v) { return f(std::clamp(v, 0.0, 1.0)); };
  RearrangementVerdict v;
  v.lhs = g.integrate(clamp01);
  v.rhs = g_hat.integrate(clamp01);
  v.holds = v.lhs <= v.rhs + tol;
  return v;
}

enum class WorstCase { LazyEdge, NonlazyTwostep, LazyInBoundary, LazyOutBoundary };

struct WorstProfileParams {
  double pi_a = 0.0;
  /// Q(A,A^c) for LazyEdge, Psi(A) for NonlazyTwostep.
  double area = 0.0;
  /// Crossing point for NonlazyTwostep.
  double crossing = 0.5;
  /// pi(boundary) for the boundary cases.
  double boundary_mass = 0.0;
  /// Minimum off-diagonal transition probability for the boundary cases.
  double p0 = 0.0;
};

namespace detail {

inline double checked_level(double v, const char* what) {
  if (v < -kIdentityTolerance || v > 1.0 + kIdentityTolerance || !std::isfinite(v)) {
    throw Error(ErrorCode::InconsistentParams,
                std::string(what) + ": piece value " + std::to_string(v) + " outside [0,1]");
  }
  return std::clamp(v, 0.0, 1.0);
}

inline void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::InconsistentParams, std::string(what) + " must lie in [0,1]");
  }
}

}  // namespace detail

/// Extremal step function m(u) whose running integrals are dominated by those
/// of every profile consistent with the given parameters.
inline StepFunction worst_profile(WorstCase kind, const WorstProfileParams& q) {
  using detail::checked_level;
  detail::check_unit(q.pi_a, "pi_a");
  detail::check_unit(q.area, "area");
  switch (kind) {
    case WorstCase::LazyEdge:
      return StepFunction::from_pieces({{0.5, checked_level(q.pi_a + 2.0 * q.area, "lazy_edge")},
                                        {1.0, checked_level(q.pi_a - 2.0 * q.area, "lazy_edge")}});
    case WorstCase::NonlazyTwostep: {
      detail::check_unit(q.crossing, "crossing");
      if (q.area <= kIdentityTolerance && (q.crossing == 0.0 || q.crossing == 1.0)) {
        return StepFunction::constant(q.pi_a);
      }
      if (q.crossing == 0.0 || q.crossing == 1.0) {
        throw Error(ErrorCode::InconsistentParams, "positive area needs an interior crossing point");
      }
      return StepFunction::from_pieces(
          {{q.crossing, checked_level(q.pi_a + q.area / q.crossing, "nonlazy_twostep")},
           {1.0, checked_level(q.pi_a - q.area / (1.0 - q.crossing), "nonlazy_twostep")}});
    }
    case WorstCase::LazyInBoundary: {
      detail::check_unit(q.boundary_mass, "boundary_mass");
      if (!(q.p0 > 0.0 && q.p0 <= 0.5)) {
        throw Error(ErrorCode::InconsistentParams, "lazy boundary profiles need 0 < P0 <= 1/2");
      }
      return StepFunction::from_pieces(
          {{0.5, checked_level(q.pi_a + 2.0 * q.p0 * q.boundary_mass, "lazy_in_boundary")},
           {1.0 - q.p0, checked_level(q.pi_a, "lazy_in_boundary")},
           {1.0, checked_level(q.pi_a - q.boundary_mass, "lazy_in_boundary")}});
    }
    case WorstCase::LazyOutBoundary: {
      detail::check_unit(q.boundary_mass, "boundary_mass");
      if (!(q.p0 > 0.0 && q.p0 <= 0.5)) {
        throw Error(ErrorCode::InconsistentParams, "lazy boundary profiles need 0 < P0 <= 1/2");
      }
      return StepFunction::from_pieces(
          {{q.p0, checked_level(q.pi_a + q.boundary_mass, "lazy_out_boundary")},
           {0.5, checked_level(q.pi_a, "lazy_out_boundary")},
           {1.0, checked_level(q.pi_a - 2.0 * q.p0 * q.boundary_mass, "lazy_out_boundary")}});
    }
  }
  throw Error(ErrorCode::InconsistentParams, "unknown worst case");
}

/// sqrt(1 - (X-Y)^2) - sqrt(XY) - sqrt((1-X)(1-Y)); non-negative on [0,1]^2.
inline double appendix_slack(double X, double Y) {
  return std::sqrt(1.0 - (X - Y) * (X - Y)) - std::sqrt(X * Y) - std::sqrt((1.0 - X) * (1.0 - Y));
}

}  // namespace cheeger
