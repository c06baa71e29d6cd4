#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cheeger/error.hpp"

namespace cheeger {

/// Piecewise-constant function on (0,1]: values[k] holds on (edges[k], edges[k+1]],
/// with edges strictly increasing from 0 to 1.
struct StepFunction {
  std::vector<double> edges{0.0, 1.0};
  std::vector<double> values{0.0};

  static StepFunction constant(double value) { return StepFunction{{0.0, 1.0}, {value}}; }

  /// Builds from (right edge, value) pairs in increasing edge order; the last
  /// right edge must be 1. Zero-width pieces are dropped.
  static StepFunction from_pieces(const std::vector<std::pair<double, double>>& pieces) {
    StepFunction f;
    f.edges = {0.0};
    f.values.clear();
    for (const auto& [right, value] : pieces) {
      if (right <= f.edges.back()) continue;
      f.edges.push_back(right);
      f.values.push_back(value);
    }
    if (f.values.empty() || f.edges.back() != 1.0) {
      throw Error(ErrorCode::InconsistentParams, "step function must end at u = 1");
    }
    return f;
  }

  std::size_t pieces() const { return values.size(); }
  double width(std::size_t k) const { return edges[k + 1] - edges[k]; }

  /// Index of the piece (edges[k], edges[k+1]] containing u; u <= 0 maps to the first piece.
  std::size_t piece_at(double u) const {
    const auto it = std::lower_bound(edges.begin() + 1, edges.end(), u);
    if (it == edges.end()) return pieces() - 1;
    return static_cast<std::size_t>(it - edges.begin() - 1);
  }

  double at(double u) const { return values[piece_at(u)]; }

  template <class F>
  double integrate(F&& f) const {
    double total = 0.0;
    for (std::size_t k = 0; k < pieces(); ++k) total += width(k) * f(values[k]);
    return total;
  }

  double integral() const {
    return integrate([](double v) { return v; });
  }

  /// Integral of f(value) over (lo, hi].
  template <class F>
  double integrate_between(double lo, double hi, F&& f) const {
    double total = 0.0;
    for (std::size_t k = 0; k < pieces(); ++k) {
      const double a = std::max(lo, edges[k]);
      const double b = std::min(hi, edges[k + 1]);
      if (b > a) total += (b - a) * f(values[k]);
    }
    return total;
  }

  /// Integral of the function itself over (0, t].
  double running_integral(double t) const {
    return integrate_between(0.0, t, [](double v) { return v; });
  }

  bool non_increasing(double tol = 0.0) const {
    for (std::size_t k = 1; k < pieces(); ++k) {
      if (values[k] > values[k - 1] + tol) return false;
    }
    return true;
  }

  double min_value() const { return *std::min_element(values.begin(), values.end()); }
  double max_value() const { return *std::max_element(values.begin(), values.end()); }
};

}  // namespace cheeger
