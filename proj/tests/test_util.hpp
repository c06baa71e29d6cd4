#pragma once

#include <cstdint>
#include <optional>

#include "cheeger/cheeger.hpp"
#include "oracle.hpp"

namespace testutil {

inline cheeger::MarkovKernel from_rows(const oracle::Matrix& rows) { return cheeger::make_kernel(rows); }

inline cheeger::MarkovKernel chain(cheeger::ChainFamily family, std::size_t n = 2,
                                   std::optional<double> laziness = std::nullopt, std::uint64_t seed = 0) {
  cheeger::ChainSpec s;
  s.family = family;
  s.n = n;
  s.d = n;
  s.seed = seed;
  s.laziness = laziness;
  return cheeger::generate(s);
}

inline cheeger::MarkovKernel two_point() { return chain(cheeger::ChainFamily::TwoPoint); }
inline cheeger::MarkovKernel cycle(std::size_t n) { return chain(cheeger::ChainFamily::Cycle, n); }
inline cheeger::MarkovKernel lazy_cycle(std::size_t n) { return chain(cheeger::ChainFamily::LazyCycle, n); }
inline cheeger::MarkovKernel rotation(std::size_t n) { return chain(cheeger::ChainFamily::Rotation, n); }

inline oracle::Matrix rows_of(const cheeger::MarkovKernel& K) { return oracle::from_eigen(K.P()); }

/// Alternating reversible / general random kernels with 3 <= n <= n_max.
inline std::vector<cheeger::MarkovKernel> random_kernels(std::uint64_t seed, std::size_t count,
                                                         std::size_t n_max = 8, bool lazy = false) {
  cheeger::VerifyConfig c;
  c.seed = seed;
  c.count = count;
  c.n_max = n_max;
  std::vector<cheeger::MarkovKernel> out;
  for (auto& f : cheeger::detail::random_fixtures(c, lazy)) out.push_back(f.kernel);
  return out;
}

}  // namespace testutil
