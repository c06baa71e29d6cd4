#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cheeger/error.hpp"
#include "cheeger/kernel.hpp"
#include "cheeger/spectra.hpp"
#include "cheeger/vertex_set.hpp"

namespace cheeger {

/// Slack allowed when checking a lower bound against its exact target.
inline constexpr double kBoundSlack = 1e-9;

/// Which exact spectral quantity a lower bound targets.
enum class Target { Gap, OneMinusLambdaMax, OneMinusLambdaStar };

constexpr std::string_view to_string(Target t) {
  switch (t) {
    case Target::Gap: return "gap";
    case Target::OneMinusLambdaMax: return "1-lambda_max";
    case Target::OneMinusLambdaStar: return "1-lambda_star";
  }
  return "?";
}

inline double target_value(const Spectrum& s, Target t) {
  switch (t) {
    case Target::Gap: return s.gap;
    case Target::OneMinusLambdaMax: return 1.0 - s.lambda_max;
    case Target::OneMinusLambdaStar: return 1.0 - s.lambda_star;
  }
  return std::nan("");
}

/// One row of a bound report.
struct BoundEntry {
  std::string name;
  double value = std::nan("");
  Target target = Target::Gap;
  double exact = std::nan("");
  bool valid = false;
  std::optional<Mask> witness;
  /// Weaker closed forms implied by `value`, in the order they are displayed.
  std::vector<std::pair<std::string, double>> weaker;
  /// How the kernel was routed: "direct", "symmetrized", "P0/2", "lazified".
  std::string route = "direct";
  /// Upper bound on the same target where the theorem states one (chi_cheeger).
  std::optional<double> upper;
  bool upper_valid = true;
  /// Free-form detail (skip counts, route notes).
  std::string note;
  /// Set when the bound could not be evaluated; value/valid are then meaningless.
  std::optional<std::string> error;
};

/// Fills exact and the validity flags from the true spectrum.
inline BoundEntry& attach_exact(BoundEntry& e, const Spectrum& s) {
  e.exact = target_value(s, e.target);
  e.valid = !e.error && e.value <= e.exact + kBoundSlack;
  if (e.upper) e.upper_valid = e.exact <= *e.upper + kBoundSlack;
  return e;
}

/// sqrt of a radicand that may sit a rounding error below zero at sharp cases.
inline double clamped_sqrt(double radicand, std::string_view where) {
  if (radicand < 0.0) {
    if (radicand >= -kIdentityTolerance) return 0.0;
    throw Error(ErrorCode::InconsistentParams,
                std::string(where) + ": negative radicand " + std::to_string(radicand));
  }
  return std::sqrt(radicand);
}

}  // namespace cheeger
