#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <thread>
#include <vector>

#include "cheeger/error.hpp"
#include "cheeger/kernel.hpp"
#include "cheeger/vertex_set.hpp"

namespace cheeger {

/// Exhaustive sweeps are refused above this many states (2^24 subsets).
inline constexpr std::size_t kMaxEnumerationStates = 24;
/// Sets with pi(A) <= 1/2 + kHalfSlack count as the "half" family.
inline constexpr double kHalfSlack = 1e-12;
/// Values within this distance of the optimum count as ties for witness reporting.
inline constexpr double kTieTolerance = 1e-12;

inline void require_enumerable(const MarkovKernel& K) {
  if (K.n() > kMaxEnumerationStates) {
    throw Error(ErrorCode::TooManyStates, std::to_string(K.n()) + " states exceeds the " +
                                              std::to_string(kMaxEnumerationStates) +
                                              "-state enumeration limit");
  }
}

/// pi(V) is exactly 1 so sharp cases like f(1) = 0 are not blurred by rounding.
inline double set_measure(const MarkovKernel& K, Mask bits) {
  if (K.n() <= kMaxMaskStates && bits == full_mask(K.n())) return 1.0;
  double total = 0.0;
  for (Mask rest = bits; rest != 0; rest &= rest - 1) {
    total += K.pi(static_cast<std::size_t>(std::countr_zero(rest)));
  }
  return total;
}

inline VertexSet make_set(const MarkovKernel& K, Mask bits) {
  if (K.n() > kMaxMaskStates) {
    throw Error(ErrorCode::TooManyStates, "vertex sets support at most 32 states");
  }
  if ((bits & ~full_mask(K.n())) != 0) {
    throw Error(ErrorCode::InvalidInput, "set " + format_mask(bits) + " has states outside 0.." +
                                             std::to_string(K.n() - 1));
  }
  return VertexSet{bits, set_measure(K, bits)};
}

inline VertexSet make_set(const MarkovKernel& K, std::initializer_list<std::size_t> states) {
  Mask bits = 0;
  for (std::size_t x : states) {
    if (x >= kMaxMaskStates) throw Error(ErrorCode::InvalidInput, "state index out of range");
    bits |= Mask{1} << x;
  }
  return make_set(K, bits);
}

inline VertexSet complement(const MarkovKernel& K, const VertexSet& A) {
  return make_set(K, full_mask(K.n()) & ~A.bits);
}

inline bool is_proper(const MarkovKernel& K, const VertexSet& A) {
  return A.bits != 0 && A.bits != full_mask(K.n());
}

/// Lazy, deterministic stream of subsets in ascending bitmask order over a
/// half-open bitmask range, filtered by one of three predicates.
class SubsetStream {
 public:
  enum class Filter { Proper, HalfProper, Measure };

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = VertexSet;
    using difference_type = std::ptrdiff_t;
    using pointer = const VertexSet*;
    using reference = const VertexSet&;

    iterator() = default;
    iterator(const SubsetStream* stream, std::uint64_t at) : stream_(stream), at_(at) { settle(); }

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++() {
      ++at_;
      settle();
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& it, std::default_sentinel_t) {
      return it.at_ >= it.stream_->hi();
    }

   private:
    void settle() {
      for (; at_ < stream_->hi(); ++at_) {
        current_ = make_set(stream_->kernel(), static_cast<Mask>(at_));
        if (stream_->accepts(current_)) return;
      }
    }

    const SubsetStream* stream_ = nullptr;
    std::uint64_t at_ = 0;
    VertexSet current_{};
  };

  SubsetStream(const MarkovKernel& K, Filter filter, std::uint64_t lo, std::uint64_t hi,
               double target = 0.0, double tol = 0.0)
      : K_(&K), filter_(filter), lo_(lo), hi_(hi), target_(target), tol_(tol) {}

  iterator begin() const { return iterator(this, lo_); }
  std::default_sentinel_t end() const { return {}; }

  const MarkovKernel& kernel() const { return *K_; }
  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }

  bool accepts(const VertexSet& A) const {
    switch (filter_) {
      case Filter::Proper: return is_proper(*K_, A);
      case Filter::HalfProper: return is_proper(*K_, A) && A.measure <= 0.5 + kHalfSlack;
      case Filter::Measure: return std::abs(A.measure - target_) <= tol_;
    }
    return false;
  }

  /// Contiguous sub-ranges whose concatenation is this stream.
  std::vector<SubsetStream> split(std::size_t parts) const {
    std::vector<SubsetStream> out;
    const std::uint64_t span = hi_ > lo_ ? hi_ - lo_ : 0;
    if (parts <= 1 || span < parts) {
      out.push_back(*this);
      return out;
    }
    for (std::size_t i = 0; i < parts; ++i) {
      const std::uint64_t a = lo_ + span * i / parts;
      const std::uint64_t b = lo_ + span * (i + 1) / parts;
      out.emplace_back(*K_, filter_, a, b, target_, tol_);
    }
    return out;
  }

  std::size_t count() const {
    std::size_t total = 0;
    for (auto it = begin(); it != end(); ++it) ++total;
    return total;
  }

 private:
  const MarkovKernel* K_;
  Filter filter_;
  std::uint64_t lo_;
  std::uint64_t hi_;
  double target_;
  double tol_;
};

/// Every A with {} != A != V; with half_only, only those with pi(A) <= 1/2.
inline SubsetStream enumerate_proper_subsets(const MarkovKernel& K, bool half_only) {
  require_enumerable(K);
  const std::uint64_t full = std::uint64_t{1} << K.n();
  return SubsetStream(K, half_only ? SubsetStream::Filter::HalfProper : SubsetStream::Filter::Proper,
                      1, full - 1);
}

/// Every B (including {} and V) with |pi(B) - target| <= tol.
inline SubsetStream subsets_with_measure(const MarkovKernel& K, double target, double tol) {
  require_enumerable(K);
  if (tol < 0.0) throw Error(ErrorCode::InvalidInput, "measure tolerance must be non-negative");
  return SubsetStream(K, SubsetStream::Filter::Measure, 0, std::uint64_t{1} << K.n(), target, tol);
}

/// Runs body(i) for i in [0, parts) on separate threads and rethrows the
/// first failure in index order.
template <class Body>
void run_parallel(std::size_t parts, Body&& body) {
  if (parts <= 1) {
    body(std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> failures(parts);
  std::vector<std::thread> threads;
  threads.reserve(parts - 1);
  for (std::size_t i = 1; i < parts; ++i) {
    threads.emplace_back([&, i] {
      try {
        body(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    });
  }
  try {
    body(std::size_t{0});
  } catch (...) {
    failures[0] = std::current_exception();
  }
  for (auto& t : threads) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

enum class Sense { Minimize, Maximize };

struct SweepResult {
  bool found = false;
  double value = 0.0;
  Mask witness = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

/// Optimizes eval over a subset stream. eval returns std::nullopt to skip a set.
///
/// The optimum is an exact min/max; the witness is the smallest bitmask whose
/// value lies within kTieTolerance of it. Both reductions are associative, so
/// the result does not depend on the worker count. eval must be thread-safe.
template <class Eval>
SweepResult sweep(const SubsetStream& stream, Sense sense, Eval&& eval, std::size_t workers = 1) {
  const auto chunks = stream.split(workers);
  const bool minimize = sense == Sense::Minimize;

  std::vector<SweepResult> partial(chunks.size());
  run_parallel(chunks.size(), [&](std::size_t i) {
    SweepResult& r = partial[i];
    for (const VertexSet& A : chunks[i]) {
      const std::optional<double> v = eval(A);
      if (!v) {
        ++r.skipped;
        continue;
      }
      ++r.evaluated;
      if (!r.found || (minimize ? *v < r.value : *v > r.value)) {
        r.found = true;
        r.value = *v;
      }
    }
  });

  SweepResult result;
  for (const auto& r : partial) {
    result.evaluated += r.evaluated;
    result.skipped += r.skipped;
    if (r.found && (!result.found || (minimize ? r.value < result.value : r.value > result.value))) {
      result.found = true;
      result.value = r.value;
    }
  }
  if (!result.found) return result;

  std::vector<std::optional<Mask>> first(chunks.size());
  run_parallel(chunks.size(), [&](std::size_t i) {
    for (const VertexSet& A : chunks[i]) {
      const std::optional<double> v = eval(A);
      if (v && std::abs(*v - result.value) <= kTieTolerance) {
        first[i] = A.bits;
        return;
      }
    }
  });
  for (const auto& f : first) {
    if (f) {
      result.witness = *f;
      break;
    }
  }
  return result;
}

inline std::size_t default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace cheeger
