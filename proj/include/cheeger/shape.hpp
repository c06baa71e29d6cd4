#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cheeger/error.hpp"

namespace cheeger {

enum class ShapeFamily { SqrtA, SqrtAOneMinusA, SinPiA, Custom };

/// A function f:[0,1] -> R_+ together with the structural facts the
/// theorems gate on.
struct ShapeFunction {
  ShapeFamily family = ShapeFamily::Custom;
  std::string name;
  std::function<double(double)> evaluate;
  /// Closed-form f'' where known; required by the diffiQ bound.
  std::function<double(double)> second_derivative;
  /// For all a in (0,1/2): f(a) <= f(1-a). Allows restricting maxima to pi(A) <= 1/2.
  bool symmetric = false;
  bool concave = false;
  bool second_derivative_concave = false;

  double operator()(double a) const { return evaluate(a); }
};

namespace shapes {

inline ShapeFunction sqrt_a() {
  return {ShapeFamily::SqrtA,
          "sqrt(a)",
          [](double a) { return std::sqrt(std::max(0.0, a)); },
          [](double a) { return -0.25 * std::pow(a, -1.5); },
          true,
          true,
          true};
}

inline ShapeFunction sqrt_a_one_minus_a() {
  return {ShapeFamily::SqrtAOneMinusA,
          "sqrt(a(1-a))",
          [](double a) { return std::sqrt(std::max(0.0, a * (1.0 - a))); },
          [](double a) { return -0.25 * std::pow(a * (1.0 - a), -1.5); },
          true,
          true,
          true};
}

/// f'' = -pi^2 sin(pi a) is convex, so only the second-derivative gate fails.
inline ShapeFunction sin_pi_a() {
  return {ShapeFamily::SinPiA,
          "sin(pi a)",
          [](double a) { return std::max(0.0, std::sin(std::numbers::pi * a)); },
          [](double a) { return -std::numbers::pi * std::numbers::pi * std::sin(std::numbers::pi * a); },
          true,
          true,
          false};
}

/// Closed-form user function; the caller vouches for the flags.
inline ShapeFunction custom(std::string name, std::function<double(double)> f, bool symmetric,
                            bool concave) {
  return {ShapeFamily::Custom, std::move(name), std::move(f), {}, symmetric, concave, false};
}

/// Grid spacing of tabulated shape functions.
inline constexpr double kTableStep = 1e-4;
inline constexpr std::size_t kTablePoints = 10001;

/// Tabulated f on the 1e-4 grid of [0,1], evaluated by linear interpolation.
/// Symmetry and concavity flags are derived from the table.
inline ShapeFunction tabulated(std::string name, std::vector<double> table) {
  if (table.size() != kTablePoints) {
    throw Error(ErrorCode::InvalidInput, "tabulated shape needs " + std::to_string(kTablePoints) +
                                             " values on the 1e-4 grid");
  }
  for (double v : table) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::InvalidInput, "tabulated shape values must be finite and non-negative");
    }
  }
  bool symmetric = true;
  for (std::size_t i = 0; i < kTablePoints / 2; ++i) {
    if (table[i] > table[kTablePoints - 1 - i] + 1e-12) symmetric = false;
  }
  bool concave = true;
  for (std::size_t i = 1; i + 1 < kTablePoints; ++i) {
    if (table[i - 1] + table[i + 1] - 2.0 * table[i] > 1e-15) concave = false;
  }
  auto shared = std::make_shared<const std::vector<double>>(std::move(table));
  auto f = [shared](double a) {
    const double x = std::clamp(a, 0.0, 1.0) / kTableStep;
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(x), kTablePoints - 2);
    const double frac = x - static_cast<double>(i);
    return (*shared)[i] * (1.0 - frac) + (*shared)[i + 1] * frac;
  };
  return {ShapeFamily::Custom, std::move(name), f, {}, symmetric, concave, false};
}

inline ShapeFunction tabulate(std::string name, const std::function<double(double)>& f) {
  std::vector<double> table(kTablePoints);
  for (std::size_t i = 0; i < kTablePoints; ++i) table[i] = f(static_cast<double>(i) * kTableStep);
  return tabulated(std::move(name), std::move(table));
}

inline std::optional<ShapeFunction> by_name(const std::string& name) {
  if (name == "sqrt_a") return sqrt_a();
  if (name == "sqrt_a_one_minus_a") return sqrt_a_one_minus_a();
  if (name == "sin_pi_a") return sin_pi_a();
  return std::nullopt;
}

}  // namespace shapes
}  // namespace cheeger
