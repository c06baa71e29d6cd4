#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cheeger/error.hpp"
#include "cheeger/kernel.hpp"

namespace cheeger {

/// Eigenvalues closer than this are treated as one value when counting multiplicities.
inline constexpr double kEigenMergeTolerance = 1e-12;
/// Residual ||P v - mu v|| / ||v|| required of every general eigenpair.
inline constexpr double kEigenResidual = 1e-10;

struct Spectrum {
  /// Real and sorted descending when reversible; otherwise sorted by
  /// decreasing modulus (ties by decreasing real part).
  std::vector<std::complex<double>> eigenvalues;
  bool reversible = false;
  double gap = 0.0;          ///< 1 - lambda_1((P + P*) / 2)
  double lambda_max = 0.0;   ///< max(lambda_1, |lambda_{n-1}|); reversible only, else NaN
  double lambda_star = 0.0;  ///< largest modulus among non-Perron eigenvalues
};

/// Eigenvalues of a reversible kernel via the symmetric matrix
/// D^{1/2} P D^{-1/2}, sorted descending.
inline std::vector<double> real_spectrum(const MarkovKernel& K) {
  if (!is_reversible(K)) {
    throw Error(ErrorCode::NotReversible, "real_spectrum requires a reversible kernel");
  }
  // Extended precision so that exact spectra (e.g. +-1 of a permutation) round
  // back to the exact double.
  using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Matrix<long double, Eigen::Dynamic, 1> root = K.pi().cast<long double>().cwiseSqrt();
  MatrixL S = root.asDiagonal() * K.P().cast<long double>() * root.cwiseInverse().asDiagonal();
  S = ((S + S.transpose()) / 2.0L).eval();
  Eigen::SelfAdjointEigenSolver<MatrixL> solver(S, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolveFailed, "symmetric eigensolver did not converge");
  }
  std::vector<double> values;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    values.push_back(static_cast<double>(solver.eigenvalues()(i)));
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

/// Eigenvalues of P by a general (complex) eigensolve, with a residual check.
inline std::vector<std::complex<double>> complex_spectrum(const MarkovKernel& K) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(K.P(), true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolveFailed, "general eigensolver did not converge");
  }
  const Eigen::MatrixXcd Pc = K.P().cast<std::complex<double>>();
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const Eigen::VectorXcd v = vectors.col(i);
    const double residual = (Pc * v - values(i) * v).norm() / v.norm();
    if (!(residual <= kEigenResidual)) {
      throw Error(ErrorCode::EigensolveFailed,
                  "eigenpair residual " + std::to_string(residual) + " exceeds tolerance");
    }
  }
  std::vector<std::complex<double>> out(values.data(), values.data() + values.size());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return a.real() > b.real();
  });
  return out;
}

/// lambda = 1 - lambda_1 of the additive symmetrization (of P itself when reversible).
inline double spectral_gap(const MarkovKernel& K) {
  const auto values = is_reversible(K) ? real_spectrum(K) : real_spectrum(additive_symmetrization(K));
  return 1.0 - values[1];
}

inline double lambda_max(const MarkovKernel& K) {
  const auto values = real_spectrum(K);
  return std::max(values[1], std::abs(values.back()));
}

/// Largest modulus among the eigenvalues of P other than the Perron root 1.
inline double lambda_star(const MarkovKernel& K) {
  if (is_reversible(K)) return lambda_max(K);
  auto values = complex_spectrum(K);
  auto perron = std::min_element(values.begin(), values.end(), [](const auto& a, const auto& b) {
    return std::abs(a - 1.0) < std::abs(b - 1.0);
  });
  values.erase(perron);
  double best = 0.0;
  for (const auto& v : values) best = std::max(best, std::abs(v));
  return best;
}

/// Distinct eigenvalues with multiplicities, merging values within kEigenMergeTolerance.
inline std::vector<std::pair<double, int>> multiplicities(const std::vector<double>& sorted_desc) {
  std::vector<std::pair<double, int>> out;
  for (double v : sorted_desc) {
    if (!out.empty() && std::abs(out.back().first - v) <= kEigenMergeTolerance) {
      ++out.back().second;
    } else {
      out.emplace_back(v, 1);
    }
  }
  return out;
}

inline Spectrum spectrum(const MarkovKernel& K) {
  Spectrum s;
  s.reversible = is_reversible(K);
  if (s.reversible) {
    const auto values = real_spectrum(K);
    for (double v : values) s.eigenvalues.emplace_back(v, 0.0);
    s.gap = 1.0 - values[1];
    s.lambda_max = std::max(values[1], std::abs(values.back()));
    s.lambda_star = s.lambda_max;
  } else {
    s.eigenvalues = complex_spectrum(K);
    s.gap = spectral_gap(K);
    s.lambda_max = std::nan("");
    s.lambda_star = lambda_star(K);
  }
  return s;
}

}  // namespace cheeger
