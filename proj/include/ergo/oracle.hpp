#pragma once

// Brute-force and sampling oracles that check the closed forms from an
// independent direction: Haar-random unitaries, permutation enumeration and
// central finite differences.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ergo/ergotropy.hpp"
#include "ergo/error.hpp"
#include "ergo/spectral.hpp"

namespace ergo {

struct Seed {
  std::uint64_t value = 0;
};

using Rng = std::mt19937_64;

inline Rng make_rng(Seed seed) { return Rng(seed.value); }

/// Haar-distributed unitary: Gram-Schmidt QR of a complex Ginibre matrix,
/// with the triangular factor's diagonal positive real.
inline ComplexMatrix sample_haar_unitary(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  ComplexMatrix z(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) z(i, j) = Complex(gauss(rng), gauss(rng));

  // Modified Gram-Schmidt over columns, two passes for orthogonality.
  for (std::size_t k = 0; k < dim; ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        Complex proj = 0.0;
        for (std::size_t i = 0; i < dim; ++i) proj += std::conj(z(i, j)) * z(i, k);
        for (std::size_t i = 0; i < dim; ++i) z(i, k) -= proj * z(i, j);
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) nrm += std::norm(z(i, k));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < dim; ++i) z(i, k) /= nrm;
  }
  return z;
}

inline ComplexMatrix sample_haar_unitary(std::size_t dim, Seed seed) {
  if (dim == 0) throw DimensionMismatch("unitary dimension must be >= 1");
  Rng rng = make_rng(seed);
  return sample_haar_unitary(dim, rng);
}

/// Flat Dirichlet sample on the probability simplex.
inline std::vector<double> sample_probabilities(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& x : p) s += (x = e(rng));
  for (auto& x : p) x /= s;
  return p;
}

/// GUE-like Hermitian matrix: N(0, scale) diagonal, complex Gaussian above it.
inline ComplexMatrix sample_hermitian(std::size_t n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = g(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = Complex(g(rng), g(rng));
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

/// U diag(p) U^H with Haar U and Dirichlet p. rank in [1, n) zeroes the
/// tail of p; rank 0 means full rank.
inline DensityMatrix sample_density(std::size_t n, Rng& rng, std::size_t rank = 0) {
  if (n == 0) throw DimensionMismatch("state dimension must be >= 1");
  if (rank == 0 || rank > n) rank = n;
  auto p = sample_probabilities(rank, rng);
  p.resize(n, 0.0);
  const ComplexMatrix u = sample_haar_unitary(n, rng);
  return DensityMatrix(u * ComplexMatrix::diagonal(p) * u.adjoint());
}

/// tr(rho H) - tr(U rho U^H H)
inline double extracted_work(const DensityMatrix& rho, const HermitianOperator& h,
                             const ComplexMatrix& u) {
  const ComplexMatrix evolved = u * rho.matrix() * u.adjoint();
  const ComplexMatrix& hm = h.matrix();
  Complex e = 0.0;
  for (std::size_t i = 0; i < hm.dim(); ++i)
    for (std::size_t j = 0; j < hm.dim(); ++j) e += evolved(i, j) * hm(j, i);
  return trace_product(rho.op(), h) - e.real();
}

/// Best work over `samples` Haar unitaries; a lower bound on the ergotropy.
/// With append_optimal the constructed optimal unitary joins the sample set.
inline double ergotropy_by_sampling(const DensityMatrix& rho, const HermitianOperator& h,
                                    std::size_t samples, Seed seed,
                                    bool append_optimal = false) {
  if (samples == 0) throw DomainError("need at least one sample");
  if (rho.dim() != h.dim()) throw DimensionMismatch("ergotropy_by_sampling: dimension mismatch");
  Rng rng = make_rng(seed);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    best = std::max(best, extracted_work(rho, h, sample_haar_unitary(rho.dim(), rng)));
  }
  if (append_optimal) best = std::max(best, extracted_work(rho, h, optimal_unitary(rho, h)));
  return best;
}

inline constexpr std::size_t kMaxEnumerationDim = 8;

/// Restricted ergotropy by trying every permutation of the energy-basis
/// diagonal: max_sigma sum_k e_k (pi_k - pi_sigma(k)).
inline double restricted_ergotropy_by_enumeration(const DensityMatrix& rho,
                                                  const HermitianOperator& h) {
  if (rho.dim() != h.dim()) throw DimensionMismatch("enumeration: dimension mismatch");
  if (rho.dim() > kMaxEnumerationDim) {
    throw DimensionTooLarge("permutation enumeration limited to dimension " +
                            std::to_string(kMaxEnumerationDim));
  }
  const auto levels = decompose(h, Ordering::ascending);
  std::vector<double> pi(rho.dim());
  for (std::size_t k = 0; k < rho.dim(); ++k) pi[k] = expectation(rho.matrix(), levels.vector(k));

  double reference = 0.0;
  for (std::size_t k = 0; k < pi.size(); ++k) reference += levels.eigenvalues[k] * pi[k];

  std::vector<std::size_t> sigma(pi.size());
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  double best = 0.0;
  do {
    double e = 0.0;
    for (std::size_t k = 0; k < pi.size(); ++k) e += levels.eigenvalues[k] * pi[sigma[k]];
    best = std::max(best, reference - e);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

struct Interval {
  double lo;
  double hi;
};

inline constexpr double kDefaultFiniteDifferenceStep = 1e-5;

/// Central difference (f(x+h) - f(x-h)) / 2h. Evaluated at h and h/2; when
/// the two disagree by more than 1e-7 the Richardson extrapolation is used.
template <class F>
double finite_difference(F&& fn, double x, double step = kDefaultFiniteDifferenceStep,
                         std::optional<Interval> domain = std::nullopt) {
  if (!(step > 0.0)) throw DomainError("finite difference step must be positive");
  if (domain && (x - step < domain->lo || x + step > domain->hi)) {
    throw DomainError("finite difference stencil leaves the valid range at x = " +
                      std::to_string(x));
  }
  auto central = [&](double h) { return (fn(x + h) - fn(x - h)) / (2.0 * h); };
  const double coarse = central(step);
  const double fine = central(0.5 * step);
  if (std::abs(coarse - fine) > 1e-7) return (4.0 * fine - coarse) / 3.0;
  return fine;
}

}  // namespace ergo
