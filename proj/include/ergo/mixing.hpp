#pragma once

// Mixing ergotropy: work lost when M gases with internal states rho_a are
// mixed into sum_a lambda_a rho_a and can only be driven collectively.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ergo/ergotropy.hpp"
#include "ergo/error.hpp"
#include "ergo/states.hpp"

namespace ergo {

/// Per-particle work balance of a mixing process.
struct MixingBalance {
  double initial = 0.0;  // sum_a lambda_a W(rho_a, H)
  double mixed = 0.0;    // W(sum_a lambda_a rho_a, H)
  double delta = 0.0;    // initial - mixed
};

struct MixingReport {
  double n_total = 1.0;
  MixingBalance full;        // unrestricted unitaries
  MixingBalance restricted;  // energy-diagonal permutations only

  double total() const { return n_total * full.delta; }
  double restricted_total() const { return n_total * restricted.delta; }
};

inline MixingReport mixing_ergotropy(const MixtureSpec& spec, const HermitianOperator& h) {
  if (spec.dim() != h.dim()) throw DimensionMismatch("mixing_ergotropy: dimension mismatch");
  MixingReport r;
  r.n_total = spec.total();
  for (std::size_t a = 0; a < spec.size(); ++a) {
    const double lambda = spec.weights()[a];
    r.full.initial += lambda * ergotropy(spec.components()[a], h).ergotropy;
    r.restricted.initial +=
        lambda * restricted_ergotropy(spec.components()[a], h).restricted_ergotropy;
  }
  const DensityMatrix mixed = mix(spec);
  r.full.mixed = ergotropy(mixed, h).ergotropy;
  r.restricted.mixed = restricted_ergotropy(mixed, h).restricted_ergotropy;
  r.full.delta = r.full.initial - r.full.mixed;
  r.restricted.delta = r.restricted.initial - r.restricted.mixed;
  return r;
}

/// Per-particle mixing ergotropy from spectra alone:
/// sum_k e_k (p_k - sum_a lambda_a p_{k,a}), all p non-increasing.
inline double mixing_ergotropy_eigenvalue_form(const MixtureSpec& spec,
                                               const HermitianOperator& h) {
  if (spec.dim() != h.dim()) throw DimensionMismatch("mixing_ergotropy: dimension mismatch");
  const auto levels = decompose(h, Ordering::ascending);
  std::vector<double> diff = mix(spec).spectrum().eigenvalues;
  for (std::size_t a = 0; a < spec.size(); ++a) {
    const auto& pa = spec.components()[a].spectrum().eigenvalues;
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k] -= spec.weights()[a] * pa[k];
  }
  double s = 0.0;
  for (std::size_t k = 0; k < diff.size(); ++k) s += levels.eigenvalues[k] * diff[k];
  return s;
}

/// Two equally weighted pure states on a two-level system with gap epsilon:
/// (N eps / 2)(1 - |<a1|a2>|).
inline double mixing_ergotropy_pure_overlap(double overlap, double epsilon, double n_total) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw DomainError("overlap " + std::to_string(overlap) + " outside [0,1]");
  }
  if (!(n_total > 0.0)) throw DomainError("n_total must be positive");
  return 0.5 * n_total * epsilon * (1.0 - overlap);
}

namespace detail {

inline void check_bloch_weights(std::span<const BlochState> states,
                                std::span<const double> weights) {
  if (states.empty()) throw WeightError("need at least one state");
  if (states.size() != weights.size()) {
    throw WeightError(std::to_string(states.size()) + " states but " +
                      std::to_string(weights.size()) + " weights");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw WeightError("weights must be positive");
    sum += w;
  }
  if (!(std::abs(sum - 1.0) <= 1e-12)) {
    throw WeightError("weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

}  // namespace detail

/// Per-particle qubit mixing ergotropy for any H with level gap epsilon:
/// (eps/2)(sum lambda |n_a| - |sum lambda n_a|).
inline double bloch_mixing_ergotropy(std::span<const BlochState> states,
                                     std::span<const double> weights, double epsilon) {
  detail::check_bloch_weights(states, weights);
  double lengths = 0.0;
  Vec3 mean{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < states.size(); ++a) {
    lengths += weights[a] * states[a].norm();
    for (int i = 0; i < 3; ++i) mean[i] += weights[a] * states[a][i];
  }
  return 0.5 * epsilon * (lengths - norm(mean));
}

/// Per-particle restricted mixing ergotropy for H = eps (1 + sigma_3)/2:
/// only the n_3 components are visible to diagonal permutations.
inline double bloch_restricted_mixing_ergotropy(std::span<const BlochState> states,
                                                std::span<const double> weights,
                                                double epsilon) {
  detail::check_bloch_weights(states, weights);
  double lengths = 0.0;
  double mean = 0.0;
  for (std::size_t a = 0; a < states.size(); ++a) {
    lengths += weights[a] * std::abs(states[a][2]);
    mean += weights[a] * states[a][2];
  }
  return 0.5 * epsilon * (lengths - std::abs(mean));
}

/// Restricted minus unrestricted mixing ergotropy. Positive means coarser
/// instruments extract more mixing work.
inline double instrument_gap(std::span<const BlochState> states, std::span<const double> weights,
                             double epsilon) {
  return bloch_restricted_mixing_ergotropy(states, weights, epsilon) -
         bloch_mixing_ergotropy(states, weights, epsilon);
}

/// Configuration with lambda_a n_{1,a} = lambda_a n_{2,a} = b and
/// lambda_a n_{3,a} = +-a (alternating), so sum_a lambda_a n_{3,a} = 0.
/// Needs an even number of components.
inline std::vector<BlochState> balanced_gap_configuration(std::span<const double> weights,
                                                          double a, double b) {
  if (weights.size() < 2 || weights.size() % 2 != 0) {
    throw DomainError("balanced configuration needs an even number of components");
  }
  if (!(a > 0.0)) throw DomainError("balanced configuration needs a > 0");
  std::vector<BlochState> states;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double lam = weights[k];
    if (!(lam > 0.0)) throw WeightError("weights must be positive");
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    // Pairs (2j, 2j+1) carry +a and -a so the n_3 balance holds exactly.
    states.emplace_back(b / lam, b / lam, sign * a / lam);
  }
  return states;
}

/// Per-particle lower bound on the instrument gap of a balanced
/// configuration: (eps/2) sqrt2 M |b| (1 - |b| / (a sqrt2)).
inline double instrument_gap_lower_bound(std::size_t components, double a, double b,
                                         double epsilon) {
  if (!(a > 0.0)) throw DomainError("bound needs a > 0");
  const double m = static_cast<double>(components);
  return 0.5 * epsilon * std::sqrt(2.0) * m * std::abs(b) *
         (1.0 - std::abs(b) / (a * std::sqrt(2.0)));
}

/// d(Delta W / N)/d|n1| for two qubit states at fixed |n2| and angle phi.
inline double mixing_ergotropy_radial_derivative(double lambda1, double r1, double r2,
                                                 double phi, double epsilon) {
  const double lambda2 = 1.0 - lambda1;
  const double c = std::cos(phi);
  const double s2 = lambda1 * lambda1 * r1 * r1 + lambda2 * lambda2 * r2 * r2 +
                    2.0 * lambda1 * lambda2 * r1 * r2 * c;
  const double s = std::sqrt(s2);
  if (!(s > 0.0)) throw DomainError("derivative undefined where the mean Bloch vector vanishes");
  return 0.5 * epsilon * lambda1 * (s - lambda1 * r1 - lambda2 * r2 * c) / s;
}

}  // namespace ergo
