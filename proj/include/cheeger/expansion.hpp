#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cheeger/error.hpp"
#include "cheeger/evolving.hpp"
#include "cheeger/kernel.hpp"
#include "cheeger/setops.hpp"

namespace cheeger {

/// Tolerance for matching pi(B) = pi(A^c) in hbar_out.
inline constexpr double kMeasureMatchTolerance = 1e-12;

struct ExpansionProfile {
  double global_value = 0.0;
  VertexSet witness;
  /// Minimum taken over pi(A) <= 1/2 only.
  bool half_family = false;
  /// Per-set values; filled only when requested.
  std::map<Mask, double> per_set;
};

namespace detail {

template <class PerSet>
ExpansionProfile minimize_sets(const MarkovKernel& K, bool half_only, PerSet&& per_set,
                               std::size_t workers, bool keep_per_set) {
  const auto stream = enumerate_proper_subsets(K, half_only);
  const auto r = sweep(
      stream, Sense::Minimize, [&](const VertexSet& A) -> std::optional<double> { return per_set(A); },
      workers);
  if (!r.found) throw Error(ErrorCode::NoFeasibleB, "empty set family");
  ExpansionProfile out{r.value, make_set(K, r.witness), half_only, {}};
  if (keep_per_set) {
    for (const VertexSet& A : stream) out.per_set.emplace(A.bits, per_set(A));
  }
  return out;
}

}  // namespace detail

/// h(A) = Q(A,A^c) / pi(A).
inline double conductance(const MarkovKernel& K, const VertexSet& A) {
  return ergodic_flow(K, A, complement(K, A)) / A.measure;
}

/// h = min over pi(A) <= 1/2 of h(A).
inline ExpansionProfile conductance_global(const MarkovKernel& K, std::size_t workers = 1,
                                           bool keep_per_set = false) {
  return detail::minimize_sets(
      K, true, [&](const VertexSet& A) { return conductance(K, A); }, workers, keep_per_set);
}

/// h~(A) = Q(A,A^c) / (pi(A) pi(A^c)).
inline double sym_conductance(const MarkovKernel& K, const VertexSet& A) {
  const VertexSet Ac = complement(K, A);
  return ergodic_flow(K, A, Ac) / (A.measure * Ac.measure);
}

/// h~ = min over all proper A of h~(A).
inline ExpansionProfile sym_conductance_global(const MarkovKernel& K, std::size_t workers = 1,
                                               bool keep_per_set = false) {
  return detail::minimize_sets(
      K, false, [&](const VertexSet& A) { return sym_conductance(K, A); }, workers, keep_per_set);
}

struct Boundaries {
  VertexSet inner;  ///< {x in A : Q(x, A^c) > 0}
  VertexSet outer;  ///< {x in A^c : Q(x, A) > 0}
};

/// Boundary membership uses exact positivity of stored transition probabilities.
inline Boundaries boundaries(const MarkovKernel& K, const VertexSet& A) {
  const std::size_t n = K.n();
  Mask inner = 0, outer = 0;
  for (std::size_t x = 0; x < n; ++x) {
    const bool in_a = A.contains(x);
    for (std::size_t y = 0; y < n; ++y) {
      if (A.contains(y) != in_a && K(x, y) > 0.0) {
        (in_a ? inner : outer) |= Mask{1} << x;
        break;
      }
    }
  }
  return {make_set(K, inner), make_set(K, outer)};
}

inline double h_in(const MarkovKernel& K, const VertexSet& A) {
  return boundaries(K, A).inner.measure / A.measure;
}

inline double h_out(const MarkovKernel& K, const VertexSet& A) {
  return boundaries(K, A).outer.measure / A.measure;
}

inline double h_in_sym(const MarkovKernel& K, const VertexSet& A) {
  return boundaries(K, A).inner.measure / (A.measure * (1.0 - A.measure));
}

struct VertexExpansions {
  ExpansionProfile h_in;
  ExpansionProfile h_out;
  ExpansionProfile h_in_sym;
};

/// h_in, h_out and h~_in, each minimized over pi(A) <= 1/2.
inline VertexExpansions vertex_expansions(const MarkovKernel& K, std::size_t workers = 1,
                                          bool keep_per_set = false) {
  return {
      detail::minimize_sets(K, true, [&](const VertexSet& A) { return h_in(K, A); }, workers,
                            keep_per_set),
      detail::minimize_sets(K, true, [&](const VertexSet& A) { return h_out(K, A); }, workers,
                            keep_per_set),
      detail::minimize_sets(
          K, true,
          [&](const VertexSet& A) {
            return boundaries(K, A).inner.measure / (A.measure * complement(K, A).measure);
          },
          workers, keep_per_set),
  };
}

/// hbar~(A) = Psi(A) / (pi(A) pi(A^c)).
inline double modified_cheeger_set(const MarkovKernel& K, const VertexSet& A) {
  return psi(K, A) / (A.measure * complement(K, A).measure);
}

/// hbar~ = min over all proper A of hbar~(A).
inline ExpansionProfile modified_cheeger(const MarkovKernel& K, std::size_t workers = 1,
                                         bool keep_per_set = false) {
  return detail::minimize_sets(
      K, false, [&](const VertexSet& A) { return modified_cheeger_set(K, A); }, workers,
      keep_per_set);
}

struct HbarOut {
  double value = 0.0;
  VertexSet witness_a;
  VertexSet witness_b;
  /// Half-family sets A admitting at least one B with pi(B) = pi(A^c).
  std::size_t feasible = 0;
  /// Half-family sets A with no measure-matching B (skipped).
  std::size_t skipped = 0;
};

/// hbar_out = min_{pi(A) <= 1/2} min_{pi(B) = pi(A^c)} pi({x in B : Q(A,x) > 0}) / pi(A).
///
/// A with no measure-matching B are skipped and counted; if every A is
/// skipped the constant is undefined and NoFeasibleB is raised.
inline HbarOut hbar_out(const MarkovKernel& K) {
  require_enumerable(K);
  const std::size_t n = K.n();
  const std::uint64_t count = std::uint64_t{1} << n;

  std::vector<std::pair<double, Mask>> by_measure;
  by_measure.reserve(count);
  for (std::uint64_t b = 0; b < count; ++b) {
    const auto B = static_cast<Mask>(b);
    by_measure.emplace_back(set_measure(K, B), B);
  }
  std::sort(by_measure.begin(), by_measure.end());

  HbarOut out;
  out.value = std::numeric_limits<double>::infinity();
  for (const VertexSet& A : enumerate_proper_subsets(K, true)) {
    Mask reached = 0;
    for (std::size_t x : members(A.bits)) {
      for (std::size_t y = 0; y < n; ++y) {
        if (K(x, y) > 0.0) reached |= Mask{1} << y;
      }
    }
    const double target = complement(K, A).measure;
    auto lo = std::lower_bound(by_measure.begin(), by_measure.end(),
                               std::make_pair(target - kMeasureMatchTolerance, Mask{0}));
    bool any = false;
    for (auto it = lo; it != by_measure.end() && it->first <= target + kMeasureMatchTolerance; ++it) {
      any = true;
      const double value = set_measure(K, it->second & reached) / A.measure;
      if (value < out.value || (value == out.value && A.bits == out.witness_a.bits &&
                                it->second < out.witness_b.bits)) {
        out.value = value;
        out.witness_a = A;
        out.witness_b = make_set(K, it->second);
      }
    }
    any ? ++out.feasible : ++out.skipped;
  }
  if (out.feasible == 0) {
    throw Error(ErrorCode::NoFeasibleB, "no set A admits B with pi(B) = pi(A^c)");
  }
  return out;
}

}  // namespace cheeger
