#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "ergo/error.hpp"
#include "ergo/mixing.hpp"
#include "ergo/states.hpp"

namespace ergo {

/// Probability vector: entries >= 0 summing to 1 within 1e-12.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw WeightError("weight vector is empty");
    double sum = 0.0;
    for (double x : entries_) {
      if (!(x >= 0.0)) throw WeightError("weights must be nonnegative");
      sum += x;
    }
    if (!(std::abs(sum - 1.0) <= 1e-12)) {
      throw WeightError("weights sum to " + std::to_string(sum) + ", expected 1");
    }
  }

  WeightVector(std::initializer_list<double> entries)
      : WeightVector(std::vector<double>(entries)) {}

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  std::vector<double> sorted_non_increasing() const {
    auto s = entries_;
    std::stable_sort(s.begin(), s.end(), std::greater<>());
    return s;
  }

 private:
  std::vector<double> entries_;
};

/// True iff lambda majorizes mu: every prefix sum of sorted lambda is at
/// least the matching prefix sum of sorted mu (1e-12 slack). The shorter
/// vector is zero-padded.
inline bool majorizes(const WeightVector& lambda, const WeightVector& mu) {
  auto l = lambda.sorted_non_increasing();
  auto m = mu.sorted_non_increasing();
  const std::size_t n = std::max(l.size(), m.size());
  l.resize(n, 0.0);
  m.resize(n, 0.0);
  double sl = 0.0, sm = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sl += l[k];
    sm += m[k];
    if (sl < sm - 1e-12) return false;
  }
  return true;
}

struct MonotonicityPair {
  double dw_mu = 0.0;      // mixing ergotropy at the more mixed weights
  double dw_lambda = 0.0;  // mixing ergotropy at the more ordered weights
};

namespace detail {

// Per-particle mixing ergotropy of pure components |basis_a> with weights w.
inline double pure_basis_mixing(const std::vector<double>& w, const ComplexMatrix& basis,
                                const HermitianOperator& h) {
  std::vector<DensityMatrix> comps;
  std::vector<double> counts;
  for (std::size_t a = 0; a < w.size(); ++a) {
    if (w[a] <= 0.0) continue;
    comps.push_back(DensityMatrix::pure(basis.column(a)));
    counts.push_back(w[a]);
  }
  return mixing_ergotropy(MixtureSpec(std::move(comps), std::move(counts)), h).full.delta;
}

}  // namespace detail

/// Quasi-classical mixing: components are the first M columns of `basis`,
/// which must be orthonormal. Returns both mixing ergotropies; requires
/// majorizes(lambda, mu).
inline MonotonicityPair quasiclassical_mixing_monotone(const WeightVector& lambda,
                                                       const WeightVector& mu,
                                                       const HermitianOperator& h,
                                                       const ComplexMatrix& basis) {
  if (!majorizes(lambda, mu)) throw PreconditionError("lambda does not majorize mu");
  const std::size_t m = std::max(lambda.size(), mu.size());
  if (m > h.dim() || basis.dim() != h.dim()) {
    throw PreconditionError("need at least as many levels as components");
  }
  auto l = lambda.entries();
  auto u = mu.entries();
  l.resize(m, 0.0);
  u.resize(m, 0.0);
  return {detail::pure_basis_mixing(u, basis, h), detail::pure_basis_mixing(l, basis, h)};
}

/// Default components: the lowest-M energy eigenvectors of h.
inline MonotonicityPair quasiclassical_mixing_monotone(const WeightVector& lambda,
                                                       const WeightVector& mu,
                                                       const HermitianOperator& h) {
  return quasiclassical_mixing_monotone(lambda, mu, h,
                                        decompose(h, Ordering::ascending).eigenvectors);
}

/// lambda1 + mu1 - 1 - lambda1 mu1 (1 - ratio): first-order (small angle)
/// margin of the monotonicity condition for two qubit states with
/// ratio = |n1| / |n2|. Nonnegative predicts monotonicity holds.
inline double first_order_margin(double lambda1, double mu1, double ratio) {
  if (!(lambda1 >= 0.0 && lambda1 <= 1.0 && mu1 >= 0.0 && mu1 <= 1.0)) {
    throw DomainError("weights outside [0,1]");
  }
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw DomainError("ratio |n1|/|n2| = " + std::to_string(ratio) + " outside [0,1]");
  }
  return lambda1 + mu1 - 1.0 - lambda1 * mu1 * (1.0 - ratio);
}

inline bool first_order_monotone_check(double lambda1, double mu1, double ratio) {
  return first_order_margin(lambda1, mu1, ratio) >= -1e-12;
}

struct MonotonicityDiagnosis {
  bool holds = true;
  double dw_lambda = 0.0;
  double dw_mu = 0.0;
};

/// Two qubit gases with Bloch vectors n1, n2, evaluated at weights lambda
/// (more ordered) and mu. Reports whether Delta W(mu) >= Delta W(lambda).
inline MonotonicityDiagnosis quantum_monotonicity_violation(const WeightVector& lambda,
                                                            const WeightVector& mu,
                                                            const BlochState& n1,
                                                            const BlochState& n2) {
  if (lambda.size() != 2 || mu.size() != 2) {
    throw PreconditionError("two-component weights required");
  }
  constexpr double tol = 1e-12;
  if (lambda[0] < lambda[1] - tol || mu[0] < mu[1] - tol || lambda[0] < mu[0] - tol) {
    throw PreconditionError("need lambda1 >= lambda2, mu1 >= mu2, lambda1 >= mu1");
  }
  const BlochState states[] = {n1, n2};
  MonotonicityDiagnosis d;
  // Delta W at a boundary weight (0 or 1) is zero: nothing is mixed.
  auto eval = [&](const WeightVector& w) {
    if (w[0] <= 0.0 || w[1] <= 0.0) return 0.0;
    return bloch_mixing_ergotropy(states, w.entries(), 1.0);
  };
  d.dw_lambda = eval(lambda);
  d.dw_mu = eval(mu);
  d.holds = d.dw_mu >= d.dw_lambda - tol;
  return d;
}

}  // namespace ergo
