#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cheeger/error.hpp"
#include "cheeger/kernel.hpp"

namespace cheeger {

enum class ChainFamily {
  TwoPoint,
  Cycle,
  LazyCycle,
  Complete,
  Hypercube,
  Rotation,
  RandomReversible,
  RandomGeneral,
};

inline constexpr std::pair<ChainFamily, const char*> kChainFamilyNames[] = {
    {ChainFamily::TwoPoint, "two_point"},
    {ChainFamily::Cycle, "cycle"},
    {ChainFamily::LazyCycle, "lazy_cycle"},
    {ChainFamily::Complete, "complete"},
    {ChainFamily::Hypercube, "hypercube"},
    {ChainFamily::Rotation, "rotation"},
    {ChainFamily::RandomReversible, "random_reversible"},
    {ChainFamily::RandomGeneral, "random_general"},
};

inline std::string to_string(ChainFamily f) {
  for (const auto& [family, name] : kChainFamilyNames) {
    if (family == f) return name;
  }
  return "?";
}

inline ChainFamily chain_family(const std::string& name) {
  for (const auto& [family, n] : kChainFamilyNames) {
    if (name == n) return family;
  }
  throw Error(ErrorCode::InvalidSpec, "unknown chain family '" + name + "'");
}

struct ChainSpec {
  ChainFamily family = ChainFamily::Cycle;
  /// Number of states; ignored by two_point and hypercube.
  std::size_t n = 2;
  /// Hypercube dimension.
  std::size_t d = 1;
  std::uint64_t seed = 0;
  /// Holding probability mixed in as laziness I + (1 - laziness) P.
  /// Unset means 1/2 for lazy_cycle and hypercube, 0 otherwise.
  std::optional<double> laziness;

  std::size_t states() const {
    switch (family) {
      case ChainFamily::TwoPoint: return 2;
      case ChainFamily::Hypercube: return std::size_t{1} << d;
      default: return n;
    }
  }
};

namespace detail {

inline void validate_spec(const ChainSpec& s) {
  if (s.laziness && !(*s.laziness >= 0.0 && *s.laziness < 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "laziness must lie in [0,1)");
  }
  switch (s.family) {
    case ChainFamily::TwoPoint: return;
    case ChainFamily::Hypercube:
      if (s.d < 1 || s.d > 12) throw Error(ErrorCode::InvalidSpec, "hypercube needs 1 <= d <= 12");
      return;
    case ChainFamily::Cycle:
    case ChainFamily::LazyCycle:
    case ChainFamily::Rotation:
    case ChainFamily::Complete:
    case ChainFamily::RandomReversible:
    case ChainFamily::RandomGeneral:
      if (s.n < 2) throw Error(ErrorCode::InvalidSpec, "chain needs n >= 2");
      if (s.n > 4096) throw Error(ErrorCode::InvalidSpec, "chain size capped at 4096");
      return;
  }
}

inline double draw_weight(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.05, 1.0)(rng);
}

}  // namespace detail

/// Builds the kernel for a chain spec; random families depend only on the seed.
inline MarkovKernel generate(const ChainSpec& s) {
  detail::validate_spec(s);
  const std::size_t n = s.states();
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N, N);
  double lazy = 0.0;

  switch (s.family) {
    case ChainFamily::TwoPoint:
      P << 0.0, 1.0, 1.0, 0.0;
      break;
    case ChainFamily::LazyCycle:
      lazy = 0.5;
      [[fallthrough]];
    case ChainFamily::Cycle:
      for (Eigen::Index i = 0; i < N; ++i) {
        P(i, (i + 1) % N) += 0.5;
        P(i, (i + N - 1) % N) += 0.5;
      }
      break;
    case ChainFamily::Complete:
      P.setConstant(1.0 / static_cast<double>(n - 1));
      P.diagonal().setZero();
      break;
    case ChainFamily::Hypercube:
      lazy = 0.5;
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t i = 0; i < s.d; ++i) {
          const std::size_t y = x ^ (std::size_t{1} << i);
          P(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = 1.0 / static_cast<double>(s.d);
        }
      }
      break;
    case ChainFamily::Rotation:
      for (Eigen::Index i = 0; i < N; ++i) P(i, (i + 1) % N) = 1.0;
      break;
    case ChainFamily::RandomReversible: {
      std::mt19937_64 rng(s.seed);
      std::bernoulli_distribution edge(0.5), loop(0.3);
      Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, N);
      std::vector<Eigen::Index> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double w = detail::draw_weight(rng);
        W(order[k], order[k + 1]) = W(order[k + 1], order[k]) = w;
      }
      for (Eigen::Index x = 0; x < N; ++x) {
        if (loop(rng)) W(x, x) = detail::draw_weight(rng);
        for (Eigen::Index y = x + 1; y < N; ++y) {
          if (edge(rng)) W(x, y) = W(y, x) = detail::draw_weight(rng);
        }
      }
      const Eigen::VectorXd rows = W.rowwise().sum();
      // pi is proportional to the row sums; it is re-solved from P so that a
      // kernel reloaded from its JSON text is bit-identical to this one.
      for (Eigen::Index x = 0; x < N; ++x) P.row(x) = W.row(x) / rows(x);
      break;
    }
    case ChainFamily::RandomGeneral: {
      std::mt19937_64 rng(s.seed);
      std::bernoulli_distribution edge(0.4);
      std::vector<Eigen::Index> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t k = 0; k < n; ++k) {
        P(order[k], order[(k + 1) % n]) = detail::draw_weight(rng);
      }
      for (Eigen::Index x = 0; x < N; ++x) {
        for (Eigen::Index y = 0; y < N; ++y) {
          if (P(x, y) == 0.0 && edge(rng)) P(x, y) = detail::draw_weight(rng);
        }
      }
      for (Eigen::Index x = 0; x < N; ++x) P.row(x) /= P.row(x).sum();
      break;
    }
  }

  if (s.laziness) lazy = *s.laziness;
  if (lazy > 0.0) {
    P *= 1.0 - lazy;
    P.diagonal().array() += lazy;
  }
  return make_kernel(std::move(P), {});
}

}  // namespace cheeger
