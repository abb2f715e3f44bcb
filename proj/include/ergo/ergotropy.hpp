#pragma once

// Maximal work extractable by cyclic Hamiltonian (unitary) processes.
//
// With H = sum_k e_k |e_k><e_k| (e ascending) and rho = sum_k p_k |p_k><p_k|
// (p non-increasing), the optimum pairs the k-th largest population with the
// k-th lowest level:
//
//   W = tr(rho H) - sum_k p_k e_k >= 0.
//
// The restricted variant only permutes the energy-basis diagonal
// pi_k = <e_k|rho|e_k>, giving W' = sum_k e_k (pi_k - pi_sorted_k) <= W.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "ergo/error.hpp"
#include "ergo/spectral.hpp"

namespace ergo {

struct ErgotropyReport {
  double initial_energy = 0.0;  // tr(rho H)
  double passive_energy = 0.0;  // sum_k p_k e_k
  double ergotropy = 0.0;       // initial - passive
  /// optimal_permutation[k]: energy level (ascending index) receiving the
  /// k-th largest eigenvector of rho. Identity in sorted index space.
  std::vector<std::size_t> optimal_permutation;
  SpectralDecomposition state_spectrum;   // non-increasing
  SpectralDecomposition energy_spectrum;  // ascending
};

struct RestrictedErgotropyReport {
  std::vector<double> diagonal;         // pi_k, levels ascending
  std::vector<double> sorted_diagonal;  // pi non-increasing
  double restricted_ergotropy = 0.0;
  /// sorted_diagonal[k] == diagonal[permutation[k]]
  std::vector<std::size_t> permutation;
};

namespace detail {

inline void require_same_dim(const DensityMatrix& rho, const HermitianOperator& h,
                             const char* who) {
  if (rho.dim() != h.dim()) {
    throw DimensionMismatch(std::string(who) + ": state dimension " +
                            std::to_string(rho.dim()) + " vs Hamiltonian dimension " +
                            std::to_string(h.dim()));
  }
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace detail

inline ErgotropyReport ergotropy(const DensityMatrix& rho, const HermitianOperator& h) {
  detail::require_same_dim(rho, h, "ergotropy");
  ErgotropyReport r{0.0, 0.0, 0.0, {}, rho.spectrum(), decompose(h, Ordering::ascending)};
  r.initial_energy = trace_product(rho.op(), h);
  r.passive_energy = detail::dot(r.state_spectrum.eigenvalues, r.energy_spectrum.eigenvalues);
  r.ergotropy = r.initial_energy - r.passive_energy;
  r.optimal_permutation.resize(rho.dim());
  std::iota(r.optimal_permutation.begin(), r.optimal_permutation.end(), std::size_t{0});
  return r;
}

/// sum_k p_k |e_k><e_k|
inline DensityMatrix passive_state(const DensityMatrix& rho, const HermitianOperator& h) {
  detail::require_same_dim(rho, h, "passive_state");
  SpectralDecomposition levels = decompose(h, Ordering::ascending);
  levels.eigenvalues = rho.spectrum().eigenvalues;
  return DensityMatrix(levels.reconstruct());
}

inline bool is_passive(const DensityMatrix& rho, const HermitianOperator& h, double tol) {
  return ergotropy(rho, h).ergotropy <= tol;
}

/// U = sum_k |e_k><p_k|, so that U rho U^H is the passive state.
inline ComplexMatrix optimal_unitary(const DensityMatrix& rho, const HermitianOperator& h) {
  detail::require_same_dim(rho, h, "optimal_unitary");
  const auto levels = decompose(h, Ordering::ascending);
  return levels.eigenvectors * rho.spectrum().eigenvectors.adjoint();
}

inline RestrictedErgotropyReport restricted_ergotropy(const DensityMatrix& rho,
                                                      const HermitianOperator& h) {
  detail::require_same_dim(rho, h, "restricted_ergotropy");
  const auto levels = decompose(h, Ordering::ascending);
  RestrictedErgotropyReport r;
  r.diagonal = diagonal_in_basis(rho.matrix(), levels);

  r.permutation.resize(r.diagonal.size());
  std::iota(r.permutation.begin(), r.permutation.end(), std::size_t{0});
  std::stable_sort(r.permutation.begin(), r.permutation.end(),
                   [&](std::size_t i, std::size_t j) { return r.diagonal[i] > r.diagonal[j]; });
  r.sorted_diagonal.reserve(r.diagonal.size());
  for (std::size_t k : r.permutation) r.sorted_diagonal.push_back(r.diagonal[k]);

  double w = 0.0;
  for (std::size_t k = 0; k < r.diagonal.size(); ++k) {
    w += levels.eigenvalues[k] * (r.diagonal[k] - r.sorted_diagonal[k]);
  }
  r.restricted_ergotropy = w;
  return r;
}

}  // namespace ergo
