#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>
#include <vector>

#include "cheeger/error.hpp"
#include "cheeger/kernel.hpp"
#include "cheeger/setops.hpp"
#include "cheeger/step_function.hpp"

namespace cheeger {

/// Thresholds closer than this merge into a single breakpoint.
inline constexpr double kThresholdMerge = 1e-14;

/// Exact step function u -> pi(A_u) of one evolving-set step from A, where
/// A_u = {y : Q(A,y) >= u pi(y)} = {y : P*(y,A) >= u}.
struct StepProfile {
  VertexSet set;
  /// t_y = Q(A,y) / pi(y), clamped to [0,1].
  std::vector<double> thresholds;
  /// u -> pi(A_u) on (0,1]; non-increasing.
  StepFunction measure;
  /// A_u on each piece of `measure`.
  std::vector<Mask> members;

  double base() const { return set.measure; }
  Mask set_at(double u) const { return members[measure.piece_at(u)]; }
};

inline StepProfile profile(const MarkovKernel& K, const VertexSet& A) {
  const std::size_t n = K.n();
  StepProfile p;
  p.set = A;
  p.thresholds.assign(n, 0.0);
  for (std::size_t y = 0; y < n; ++y) {
    double flow = 0.0;
    for (Mask a = A.bits; a != 0; a &= a - 1) {
      const auto x = static_cast<std::size_t>(std::countr_zero(a));
      flow += K.pi(x) * K(x, y);
    }
    double t = flow / K.pi(y);
    if (t >= 1.0 - kThresholdMerge) t = 1.0;
    p.thresholds[y] = std::max(0.0, t);
  }

  std::vector<std::size_t> order;
  for (std::size_t y = 0; y < n; ++y) {
    if (p.thresholds[y] > 0.0) order.push_back(y);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.thresholds[a] > p.thresholds[b];
  });

  // Groups of (nearly) equal thresholds, largest first; rep is the group's top value.
  std::vector<double> reps;
  std::vector<Mask> cumulative;
  Mask acc = 0;
  for (std::size_t y : order) {
    const double t = p.thresholds[y];
    if (reps.empty() || t < reps.back() - kThresholdMerge) {
      if (!reps.empty()) cumulative.push_back(acc);
      reps.push_back(t);
    }
    acc |= Mask{1} << y;
  }
  if (!reps.empty()) cumulative.push_back(acc);

  // Ascending in u: piece (reps[k+1], reps[k]] holds groups 0..k.
  std::vector<std::pair<double, double>> pieces;
  for (std::size_t k = reps.size(); k-- > 0;) {
    pieces.emplace_back(reps[k], set_measure(K, cumulative[k]));
    p.members.push_back(cumulative[k]);
  }
  if (reps.empty() || reps.front() < 1.0) {
    pieces.emplace_back(1.0, 0.0);
    p.members.push_back(0);
  }
  p.measure = StepFunction::from_pieces(pieces);
  return p;
}

/// integral_0^1 f(pi(A_u)) du, summed exactly over the pieces.
template <class F>
double integrate_f(const StepProfile& p, F&& f) {
  return p.measure.integrate(std::forward<F>(f));
}

struct FlowAreas {
  double upper_area;  ///< integral_0^{1/2} (pi(A_u) - pi(A)) du
  double lower_area;  ///< integral_{1/2}^1 (pi(A) - pi(A_u)) du
};

/// Both evolving-set areas around pi(A) for a lazy kernel; each equals Q(A,A^c).
inline FlowAreas ergodic_flow_identity(const MarkovKernel& K, const VertexSet& A) {
  if (!is_lazy(K)) throw Error(ErrorCode::NotLazy, "ergodic_flow_identity requires a lazy kernel");
  const StepProfile p = profile(K, A);
  const double base = A.measure;
  return {p.measure.integrate_between(0.0, 0.5, [&](double v) { return v - base; }),
          p.measure.integrate_between(0.5, 1.0, [&](double v) { return base - v; })};
}

/// Uniform draw on (0,1] from the top 53 bits of a 64-bit engine.
template <class Engine>
double uniform_open_closed(Engine& rng) {
  static_assert(Engine::max() - Engine::min() == std::numeric_limits<std::uint64_t>::max(),
                "requires a full 64-bit engine");
  return (static_cast<double>((rng() - Engine::min()) >> 11) + 1.0) * 0x1.0p-53;
}

/// One step of the evolving-set process; {} and V are absorbing.
template <class Engine>
VertexSet sample_step(const MarkovKernel& K, const VertexSet& A, Engine& rng) {
  const StepProfile p = profile(K, A);
  return make_set(K, p.set_at(uniform_open_closed(rng)));
}

struct MixingBoundEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::size_t steps = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Generator for Monte-Carlo sample `index`; depends only on (seed, index).
inline std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(detail::splitmix64(detail::splitmix64(seed) ^ index));
}

/// Monte-Carlo estimates of (1/(2 pi(x))) E_t sqrt(min{pi(S_t), 1 - pi(S_t)})
/// for S_0 = {x} and t = 0..max_steps. Sample i uses sample_engine(seed, i),
/// so results do not depend on the worker count.
inline std::vector<MixingBoundEstimate> mp_mixing_bound_trajectory(
    const MarkovKernel& K, std::size_t x, std::size_t max_steps, std::size_t samples,
    std::uint64_t seed, std::size_t workers = 1) {
  if (samples == 0) throw Error(ErrorCode::InvalidInput, "samples must be at least 1");
  if (x >= K.n()) throw Error(ErrorCode::InvalidInput, "start state out of range");
  const double scale = 1.0 / (2.0 * K.pi(x));
  const std::size_t width = max_steps + 1;
  std::vector<double> values(samples * width);

  workers = std::max<std::size_t>(1, std::min(workers, samples));
  run_parallel(workers, [&](std::size_t w) {
    std::unordered_map<Mask, StepProfile> cache;
    const std::size_t lo = samples * w / workers, hi = samples * (w + 1) / workers;
    for (std::size_t i = lo; i < hi; ++i) {
      auto rng = sample_engine(seed, i);
      VertexSet S = make_set(K, Mask{1} << x);
      for (std::size_t t = 0; t <= max_steps; ++t) {
        values[i * width + t] = scale * std::sqrt(std::max(0.0, std::min(S.measure, 1.0 - S.measure)));
        if (t == max_steps) break;
        auto it = cache.find(S.bits);
        if (it == cache.end()) it = cache.emplace(S.bits, profile(K, S)).first;
        const StepProfile& p = it->second;
        const std::size_t k = p.measure.piece_at(uniform_open_closed(rng));
        S = VertexSet{p.members[k], p.measure.values[k]};
      }
    }
  });

  std::vector<MixingBoundEstimate> out(width);
  for (std::size_t t = 0; t < width; ++t) {
    MixingBoundEstimate& e = out[t];
    e.samples = samples;
    e.steps = t;
    if (t == 0) {
      e.mean = scale * std::sqrt(std::min(K.pi(x), 1.0 - K.pi(x)));
      continue;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < samples; ++i) sum += values[i * width + t];
    e.mean = sum / static_cast<double>(samples);
    if (samples > 1) {
      double ss = 0.0;
      for (std::size_t i = 0; i < samples; ++i) {
        const double d = values[i * width + t] - e.mean;
        ss += d * d;
      }
      e.std_error = std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples));
    }
  }
  return out;
}

inline MixingBoundEstimate mp_mixing_bound(const MarkovKernel& K, std::size_t x, std::size_t steps,
                                           std::size_t samples, std::uint64_t seed,
                                           std::size_t workers = 1) {
  return mp_mixing_bound_trajectory(K, x, steps, samples, seed, workers).back();
}

/// The same quantity as mp_mixing_bound_trajectory, computed exactly by
/// propagating the distribution of S_t over all subsets. Cost grows with the
/// number of reachable sets; intended for n <= 16.
inline std::vector<double> mp_mixing_bound_exact(const MarkovKernel& K, std::size_t x,
                                                 std::size_t max_steps) {
  if (x >= K.n()) throw Error(ErrorCode::InvalidInput, "start state out of range");
  require_enumerable(K);
  const double scale = 1.0 / (2.0 * K.pi(x));
  const Mask everything = full_mask(K.n());
  std::unordered_map<Mask, double> dist{{Mask{1} << x, 1.0}};
  std::vector<double> out;
  for (std::size_t t = 0;; ++t) {
    double mean = 0.0;
    for (const auto& [bits, prob] : dist) {
      const double a = set_measure(K, bits);
      mean += prob * std::sqrt(std::max(0.0, std::min(a, 1.0 - a)));
    }
    out.push_back(scale * mean);
    if (t == max_steps) break;
    std::unordered_map<Mask, double> next;
    for (const auto& [bits, prob] : dist) {
      if (bits == 0 || bits == everything) {
        next[bits] += prob;
        continue;
      }
      const StepProfile p = profile(K, make_set(K, bits));
      for (std::size_t k = 0; k < p.measure.pieces(); ++k) next[p.members[k]] += prob * p.measure.width(k);
    }
    dist.swap(next);
  }
  return out;
}

/// Modified ergodic flow Psi(A) = (1/2) integral_0^1 |pi(A_u) - pi(A)| du.
inline double psi(const StepProfile& p) {
  const double base = p.base();
  return 0.5 * integrate_f(p, [base](double v) { return std::abs(v - base); });
}

inline double psi(const MarkovKernel& K, const VertexSet& A) { return psi(profile(K, A)); }

/// Psi(A) as a minimum flow: min over B and v with pi(B) <= pi(A^c) < pi(B + v) of
/// Q(A,B) + ((pi(A^c) - pi(B)) / pi(v)) Q(A,v). Brute force over B and v.
inline double psi_minflow(const MarkovKernel& K, const VertexSet& A) {
  require_enumerable(K);
  const std::size_t n = K.n();
  std::vector<double> into(n);
  for (std::size_t y = 0; y < n; ++y) into[y] = ergodic_flow(K, A.bits, Mask{1} << y);
  const double target = complement(K, A).measure;

  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t b = 0; b < count; ++b) {
    const auto B = static_cast<Mask>(b);
    const double mass = set_measure(K, B);
    if (mass > target + kIdentityTolerance) continue;
    double flow = 0.0;
    for (std::size_t y : members(B)) flow += into[y];
    for (std::size_t v = 0; v < n; ++v) {
      if (contains(B, v) || !(mass + K.pi(v) > target + kIdentityTolerance)) continue;
      best = std::min(best, flow + (target - mass) / K.pi(v) * into[v]);
    }
  }
  return best;
}

/// A point p with pi(A_u) >= pi(A) for u < p and pi(A_u) <= pi(A) for u > p.
/// Returns 1/2 whenever it is valid (always so for lazy kernels and for
/// constant profiles), otherwise the valid endpoint nearest 1/2.
inline double crossing_point(const StepProfile& p) {
  const StepFunction& m = p.measure;
  const double base = p.base();
  double lo = 0.0, hi = 1.0;
  for (std::size_t k = 0; k < m.pieces(); ++k) {
    if (m.values[k] > base + kIdentityTolerance) lo = std::max(lo, m.edges[k + 1]);
    if (m.values[k] < base - kIdentityTolerance) hi = std::min(hi, m.edges[k]);
  }
  return std::clamp(0.5, lo, std::max(lo, hi));
}

}  // namespace cheeger
