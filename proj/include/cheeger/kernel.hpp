#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cheeger/error.hpp"
#include "cheeger/vertex_set.hpp"

namespace cheeger {

/// Input validation tolerance (row sums, supplied stationary vectors).
inline constexpr double kInputTolerance = 1e-9;
/// Residual required of the computed stationary distribution.
inline constexpr double kStationaryResidual = 1e-10;
/// Tolerance for internal identities between exactly related quantities.
inline constexpr double kIdentityTolerance = 1e-12;

class MarkovKernel;
MarkovKernel make_kernel(Eigen::MatrixXd P, std::vector<std::string> labels = {});
MarkovKernel make_kernel(Eigen::MatrixXd P, Eigen::VectorXd pi, std::vector<std::string> labels);

/// Finite irreducible row-stochastic kernel with its stationary distribution.
///
/// Instances are only produced by make_kernel, which validates P and solves
/// for pi, so every MarkovKernel satisfies: rows sum to 1, pi > 0, pi P = pi,
/// and the support graph is strongly connected. Immutable after construction.
class MarkovKernel {
 public:
  std::size_t n() const { return static_cast<std::size_t>(P_.rows()); }
  const Eigen::MatrixXd& P() const { return P_; }
  double operator()(std::size_t x, std::size_t y) const {
    return P_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
  }
  const Eigen::VectorXd& pi() const { return pi_; }
  double pi(std::size_t x) const { return pi_(static_cast<Eigen::Index>(x)); }

  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(std::size_t x) const {
    return labels_.empty() ? std::to_string(x) : labels_[x];
  }

 private:
  MarkovKernel(Eigen::MatrixXd P, Eigen::VectorXd pi, std::vector<std::string> labels)
      : P_(std::move(P)), pi_(std::move(pi)), labels_(std::move(labels)) {}

  friend MarkovKernel make_kernel(Eigen::MatrixXd, Eigen::VectorXd, std::vector<std::string>);
  friend MarkovKernel make_kernel(Eigen::MatrixXd, std::vector<std::string>);

  Eigen::MatrixXd P_;
  Eigen::VectorXd pi_;
  std::vector<std::string> labels_;
};

namespace detail {

inline void validate_matrix(const Eigen::MatrixXd& P, const std::vector<std::string>& labels) {
  const auto n = P.rows();
  if (n < 2 || P.cols() != n) {
    throw Error(ErrorCode::InvalidInput, "transition matrix must be square with at least 2 states");
  }
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != n) {
    throw Error(ErrorCode::InvalidInput, "label count " + std::to_string(labels.size()) +
                                             " does not match state count " + std::to_string(n));
  }
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      const double p = P(x, y);
      if (!std::isfinite(p)) {
        throw Error(ErrorCode::InvalidInput, "non-finite entry at (" + std::to_string(x) + "," +
                                                 std::to_string(y) + ")");
      }
      if (p < 0.0) {
        throw Error(ErrorCode::NegativeEntry, "entry (" + std::to_string(x) + "," +
                                                  std::to_string(y) + ") is negative");
      }
    }
    const double row = P.row(x).sum();
    if (std::abs(row - 1.0) > kInputTolerance) {
      throw Error(ErrorCode::NotStochastic,
                  "row " + std::to_string(x) + " sums to " + std::to_string(row));
    }
  }
}

// Reachability on the exact support pattern, forwards and backwards from 0.
inline bool strongly_connected(const Eigen::MatrixXd& P) {
  const auto n = P.rows();
  auto reach_all = [&](bool transpose) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    Eigen::Index count = 1;
    while (!stack.empty()) {
      const Eigen::Index x = stack.back();
      stack.pop_back();
      for (Eigen::Index y = 0; y < n; ++y) {
        const double p = transpose ? P(y, x) : P(x, y);
        if (p > 0.0 && !seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          ++count;
          stack.push_back(y);
        }
      }
    }
    return count == n;
  };
  return reach_all(false) && reach_all(true);
}

inline double stationary_residual(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi) {
  return (P.transpose() * pi - pi).cwiseAbs().maxCoeff();
}

// Residual allowance: rows accepted within kInputTolerance of summing to 1
// admit no exact fixed point, so their defect is added to the target.
inline double residual_allowance(const Eigen::MatrixXd& P) {
  return kStationaryResidual + (P.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

// Null space of (P^T - I) with the last equation replaced by sum(pi) = 1,
// followed by power-iteration refinement sweeps.
inline Eigen::VectorXd solve_stationary(const Eigen::MatrixXd& P) {
  const auto n = P.rows();
  const double allowance = residual_allowance(P);
  Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd pi = A.fullPivLu().solve(b);
  for (int sweep = 0; sweep < 4; ++sweep) {
    pi = P.transpose() * pi;
    pi /= pi.sum();
    if (stationary_residual(P, pi) <= allowance) break;
  }
  if (!(pi.minCoeff() > 0.0) || stationary_residual(P, pi) > allowance) {
    throw Error(ErrorCode::StationarySolveFailed, "stationary distribution did not converge");
  }
  return pi;
}

}  // namespace detail

/// Validates P and computes its stationary distribution.
inline MarkovKernel make_kernel(Eigen::MatrixXd P, std::vector<std::string> labels) {
  detail::validate_matrix(P, labels);
  if (!detail::strongly_connected(P)) {
    throw Error(ErrorCode::NotIrreducible, "support graph is not strongly connected");
  }
  Eigen::VectorXd pi = detail::solve_stationary(P);
  return MarkovKernel(std::move(P), std::move(pi), std::move(labels));
}

/// Validates P together with a caller-supplied stationary distribution
/// (used where pi is known in closed form, e.g. weight-derived reversible chains).
inline MarkovKernel make_kernel(Eigen::MatrixXd P, Eigen::VectorXd pi,
                                std::vector<std::string> labels) {
  detail::validate_matrix(P, labels);
  if (!detail::strongly_connected(P)) {
    throw Error(ErrorCode::NotIrreducible, "support graph is not strongly connected");
  }
  if (pi.size() != P.rows() || !(pi.minCoeff() > 0.0) ||
      std::abs(pi.sum() - 1.0) > kInputTolerance) {
    throw Error(ErrorCode::InvalidInput, "supplied stationary distribution is not a positive "
                                         "probability vector of matching length");
  }
  pi /= pi.sum();
  if (detail::stationary_residual(P, pi) > detail::residual_allowance(P)) {
    throw Error(ErrorCode::InvalidInput, "supplied distribution is not stationary for P");
  }
  return MarkovKernel(std::move(P), std::move(pi), std::move(labels));
}

inline MarkovKernel make_kernel(const std::vector<std::vector<double>>& rows,
                                std::vector<std::string> labels = {}) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd P(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto& row = rows[static_cast<std::size_t>(x)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorCode::InvalidInput, "row " + std::to_string(x) + " has " +
                                               std::to_string(row.size()) + " entries, expected " +
                                               std::to_string(n));
    }
    for (Eigen::Index y = 0; y < n; ++y) P(x, y) = row[static_cast<std::size_t>(y)];
  }
  return make_kernel(std::move(P), std::move(labels));
}

/// max_{x,y} |pi(x)P(x,y) - pi(y)P(y,x)| <= tol.
inline bool is_reversible(const MarkovKernel& K, double tol = kInputTolerance) {
  const auto flows = K.pi().asDiagonal() * K.P();
  return (flows - flows.transpose()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_lazy(const MarkovKernel& K) {
  return K.P().diagonal().minCoeff() >= 0.5 - kIdentityTolerance;
}

/// P*(x,y) = pi(y) P(y,x) / pi(x).
inline MarkovKernel time_reversal(const MarkovKernel& K) {
  const Eigen::VectorXd& pi = K.pi();
  Eigen::MatrixXd R = pi.cwiseInverse().asDiagonal() * K.P().transpose() * pi.asDiagonal();
  return make_kernel(std::move(R), pi, K.labels());
}

/// (P + P*) / 2, reversible with the same pi.
inline MarkovKernel additive_symmetrization(const MarkovKernel& K) {
  const Eigen::VectorXd& pi = K.pi();
  Eigen::MatrixXd R = pi.cwiseInverse().asDiagonal() * K.P().transpose() * pi.asDiagonal();
  Eigen::MatrixXd S = 0.5 * (K.P() + R);
  return make_kernel(std::move(S), pi, K.labels());
}

/// P' = (I + (P + P*)/2) / 2: lazy, reversible, half the ergodic flow of P.
inline MarkovKernel lazify(const MarkovKernel& K) {
  const Eigen::VectorXd& pi = K.pi();
  const auto n = static_cast<Eigen::Index>(K.n());
  Eigen::MatrixXd R = pi.cwiseInverse().asDiagonal() * K.P().transpose() * pi.asDiagonal();
  Eigen::MatrixXd L = 0.5 * (Eigen::MatrixXd::Identity(n, n) + 0.5 * (K.P() + R));
  return make_kernel(std::move(L), pi, K.labels());
}

/// Q(A,B) = sum_{x in A, y in B} pi(x) P(x,y).
inline double ergodic_flow(const MarkovKernel& K, Mask A, Mask B) {
  double total = 0.0;
  for (Mask a = A; a != 0; a &= a - 1) {
    const auto x = static_cast<std::size_t>(std::countr_zero(a));
    double row = 0.0;
    for (Mask b = B; b != 0; b &= b - 1) {
      row += K(x, static_cast<std::size_t>(std::countr_zero(b)));
    }
    total += K.pi(x) * row;
  }
  return total;
}

inline double ergodic_flow(const MarkovKernel& K, const VertexSet& A, const VertexSet& B) {
  return ergodic_flow(K, A.bits, B.bits);
}

/// Smallest positive transition probability: P0 over x != y, or P0-hat when
/// the diagonal is included.
inline double min_transition_prob(const MarkovKernel& K, bool include_diagonal) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < K.n(); ++x) {
    for (std::size_t y = 0; y < K.n(); ++y) {
      if (x == y && !include_diagonal) continue;
      const double p = K(x, y);
      if (p > 0.0) best = std::min(best, p);
    }
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::NoPositiveEntry, "no positive transition probability in scan");
  }
  return best;
}

/// ||P^t(x,.) - pi||_TV for t = 0..max_steps.
inline std::vector<double> tv_distances(const MarkovKernel& K, std::size_t x,
                                        std::size_t max_steps) {
  const auto n = static_cast<Eigen::Index>(K.n());
  Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(n);
  dist(static_cast<Eigen::Index>(x)) = 1.0;
  std::vector<double> out;
  out.reserve(max_steps + 1);
  for (std::size_t t = 0;; ++t) {
    out.push_back(0.5 * (dist - K.pi().transpose()).cwiseAbs().sum());
    if (t == max_steps) break;
    dist = dist * K.P();
  }
  return out;
}

inline double tv_distance(const MarkovKernel& K, std::size_t x, std::size_t steps) {
  return tv_distances(K, x, steps).back();
}

/// max_x ||P^t(x,.) - pi||_TV for t = 0..max_steps, via explicit matrix powers.
inline std::vector<double> max_tv_distances(const MarkovKernel& K, std::size_t max_steps) {
  const auto n = static_cast<Eigen::Index>(K.n());
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  const Eigen::RowVectorXd pi = K.pi().transpose();
  std::vector<double> out;
  out.reserve(max_steps + 1);
  for (std::size_t t = 0;; ++t) {
    double worst = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) {
      worst = std::max(worst, 0.5 * (power.row(x) - pi).cwiseAbs().sum());
    }
    out.push_back(worst);
    if (t == max_steps) break;
    power = power * K.P();
  }
  return out;
}

}  // namespace cheeger
