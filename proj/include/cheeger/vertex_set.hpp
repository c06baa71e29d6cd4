#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace cheeger {

/// Bit x set means state x belongs to the set.
using Mask = std::uint32_t;

inline constexpr std::size_t kMaxMaskStates = 32;

constexpr Mask full_mask(std::size_t n) {
  return n >= kMaxMaskStates ? ~Mask{0} : static_cast<Mask>((Mask{1} << n) - 1);
}

constexpr bool contains(Mask set, std::size_t x) { return (set >> x) & 1u; }

constexpr int cardinality(Mask set) { return std::popcount(set); }

/// A subset of the state space together with its stationary measure pi(A).
struct VertexSet {
  Mask bits = 0;
  double measure = 0.0;

  bool contains(std::size_t x) const { return cheeger::contains(bits, x); }
  int size() const { return cardinality(bits); }
  bool empty() const { return bits == 0; }

  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.bits == b.bits; }
};

inline std::vector<std::size_t> members(Mask set) {
  std::vector<std::size_t> out;
  for (Mask rest = set; rest != 0; rest &= rest - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
  }
  return out;
}

/// "{0,2,3}" style rendering of a bitmask.
inline std::string format_mask(Mask set) {
  std::string out = "{";
  bool first = true;
  for (std::size_t x : members(set)) {
    if (!first) out += ',';
    out += std::to_string(x);
    first = false;
  }
  return out + "}";
}

}  // namespace cheeger
