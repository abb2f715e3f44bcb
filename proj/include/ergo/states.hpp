#pragma once

// Domain states (Bloch vectors, mixtures, classical gases), entropy
// functionals and the Uhlmann distinguishability.

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergo/error.hpp"
#include "ergo/spectral.hpp"

namespace ergo {

// ---------------------------------------------------------------------------
// Pauli algebra and Bloch vectors

inline ComplexMatrix pauli(int k) {
  using namespace std::complex_literals;
  switch (k) {
    case 0: return ComplexMatrix::identity(2);
    case 1: return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
    case 2: return ComplexMatrix{{0.0, -1i}, {1i, 0.0}};
    case 3: return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
    default: throw DomainError("pauli index must be 0..3");
  }
}

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Spin-1/2 state rho = (1 + n.sigma)/2 with |n| <= 1. Norms in
/// (1, 1 + 1e-12] are rescaled onto the unit sphere.
class BlochState {
 public:
  static constexpr double kNormSlack = 1e-12;

  BlochState() = default;

  explicit BlochState(const Vec3& n) : n_(n) {
    const double r = ergo::norm(n_);
    if (!std::isfinite(r) || r > 1.0 + kNormSlack) {
      throw DomainError("Bloch vector norm " + std::to_string(r) + " exceeds 1");
    }
    if (r > 1.0) {
      for (double& c : n_) c /= r;
    }
  }

  BlochState(double x, double y, double z) : BlochState(Vec3{x, y, z}) {}

  const Vec3& vector() const noexcept { return n_; }
  double operator[](std::size_t i) const { return n_[i]; }
  double norm() const { return ergo::norm(n_); }

 private:
  Vec3 n_{0.0, 0.0, 0.0};
};

/// Two Bloch states with norms r1, r2 separated by angle phi: n1 along z,
/// n2 in the x-z plane.
inline std::array<BlochState, 2> bloch_pair(double r1, double r2, double phi) {
  return {BlochState(0.0, 0.0, r1), BlochState(r2 * std::sin(phi), 0.0, r2 * std::cos(phi))};
}

/// rho = (1 + n.sigma) / 2
inline DensityMatrix bloch_to_density(const BlochState& s) {
  const Vec3& n = s.vector();
  return DensityMatrix(ComplexMatrix{{0.5 * (1.0 + n[2]), Complex(0.5 * n[0], -0.5 * n[1])},
                                     {Complex(0.5 * n[0], 0.5 * n[1]), 0.5 * (1.0 - n[2])}});
}

inline BlochState density_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw DimensionMismatch("density_to_bloch requires dimension 2, got " +
                            std::to_string(rho.dim()));
  }
  const Complex r10 = rho(1, 0);
  return BlochState(2.0 * r10.real(), 2.0 * r10.imag(), (rho(0, 0) - rho(1, 1)).real());
}

/// The two-level Hamiltonian eps (1 + sigma_3) / 2 = diag(eps, 0).
inline HermitianOperator two_level_hamiltonian(double epsilon) {
  const double d[] = {epsilon, 0.0};
  return HermitianOperator::diagonal(d);
}

/// Gibbs state exp(-H/T)/Z at temperature T > 0.
inline DensityMatrix gibbs_state(const HermitianOperator& h, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  const auto levels = decompose(h, Ordering::ascending);
  const double ground = levels.eigenvalues.front();
  double z = 0.0;
  for (double e : levels.eigenvalues) z += std::exp(-(e - ground) / temperature);
  return DensityMatrix(
      levels.rebuild([&](double e) { return std::exp(-(e - ground) / temperature) / z; }));
}

// ---------------------------------------------------------------------------
// Mixtures

/// M component states with particle counts N_a; weights lambda_a = N_a / sum N.
class MixtureSpec {
 public:
  MixtureSpec(std::vector<DensityMatrix> components, std::vector<double> counts)
      : components_(std::move(components)), counts_(std::move(counts)) {
    if (components_.empty()) throw WeightError("mixture needs at least one component");
    if (counts_.size() != components_.size()) {
      throw WeightError("mixture has " + std::to_string(components_.size()) +
                        " components but " + std::to_string(counts_.size()) + " counts");
    }
    for (const auto& c : components_) {
      if (c.dim() != components_.front().dim()) {
        throw DimensionMismatch("mixture components have unequal dimensions");
      }
    }
    total_ = 0.0;
    for (double n : counts_) {
      if (!(n > 0.0) || !std::isfinite(n)) {
        throw WeightError("particle counts must be positive and finite");
      }
      total_ += n;
    }
    weights_.reserve(counts_.size());
    for (double n : counts_) weights_.push_back(n / total_);
  }

  /// Components with weights summing to one, scaled to n_total particles.
  static MixtureSpec from_weights(std::vector<DensityMatrix> components,
                                  std::span<const double> weights, double n_total = 1.0) {
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (!(std::abs(sum - 1.0) <= 1e-12)) {
      throw WeightError("weights sum to " + std::to_string(sum) + ", expected 1");
    }
    if (!(n_total > 0.0)) throw WeightError("total particle number must be positive");
    std::vector<double> counts;
    for (double w : weights) counts.push_back(w * n_total);
    return MixtureSpec(std::move(components), std::move(counts));
  }

  std::size_t size() const noexcept { return components_.size(); }
  std::size_t dim() const noexcept { return components_.front().dim(); }
  const std::vector<DensityMatrix>& components() const noexcept { return components_; }
  const std::vector<double>& counts() const noexcept { return counts_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  /// Total particle number (script N).
  double total() const noexcept { return total_; }

 private:
  std::vector<DensityMatrix> components_;
  std::vector<double> counts_;
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// sum_a lambda_a rho_a
inline DensityMatrix mix(const MixtureSpec& spec) {
  ComplexMatrix m(spec.dim());
  for (std::size_t a = 0; a < spec.size(); ++a) {
    m += spec.components()[a].matrix() * Complex(spec.weights()[a]);
  }
  return DensityMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// Entropies (nats)

/// -sum p ln p with 0 ln 0 = 0; entries <= 0 contribute nothing.
inline double shannon_entropy(std::span<const double> p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("binary_entropy argument " + std::to_string(x) + " outside [0,1]");
  }
  const double p[] = {x, 1.0 - x};
  return shannon_entropy(p);
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return shannon_entropy(rho.spectrum().eigenvalues);
}

/// Shannon entropy of the energy-level occupations <e_k|rho|e_k>, levels
/// taken from the ascending eigenbasis of h.
inline double tolman_entropy(const DensityMatrix& rho, const HermitianOperator& h) {
  if (rho.dim() != h.dim()) throw DimensionMismatch("tolman_entropy: dimension mismatch");
  return shannon_entropy(diagonal_in_basis(rho.matrix(), decompose(h, Ordering::ascending)));
}

/// Per-particle quantum mixing entropy S(sum lambda rho) - sum lambda S(rho).
/// Multiply by spec.total() for the extensive value.
inline double quantum_mixing_entropy(const MixtureSpec& spec) {
  double s = von_neumann_entropy(mix(spec));
  for (std::size_t a = 0; a < spec.size(); ++a) {
    s -= spec.weights()[a] * von_neumann_entropy(spec.components()[a]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Classical ideal-gas entropy. The temperature-dependent N f(T) term is
// omitted: it cancels in every entropy difference computed here.

struct ClassicalGasSpec {
  double particles = 0.0;
  double volume = 0.0;
  /// Gases sharing a species label are the same substance and pool after
  /// mixing. Unlabeled gases are distinct from every other gas.
  std::optional<std::string> species;
};

inline void validate(const ClassicalGasSpec& g) {
  if (!(g.particles > 0.0) || !(g.volume > 0.0)) {
    throw DomainError("gas needs positive particle number and volume");
  }
}

/// S(N, V) = N ln(V / N)
inline double classical_entropy(const ClassicalGasSpec& gas) {
  validate(gas);
  return gas.particles * std::log(gas.volume / gas.particles);
}

/// S_f - S_i for gases at a common density N/V (equal P and T), after all
/// walls are removed. Equals sum over species of N_s ln(V_total / V_s).
inline double classical_mixing_entropy(std::span<const ClassicalGasSpec> gases) {
  if (gases.empty()) return 0.0;
  for (const auto& g : gases) validate(g);
  const double density0 = gases.front().particles / gases.front().volume;
  for (const auto& g : gases) {
    const double d = g.particles / g.volume;
    if (!(std::abs(d - density0) <= 1e-9 * std::max(d, density0))) {
      throw PressureMismatch("gases differ in density N/V: " + std::to_string(d) + " vs " +
                             std::to_string(density0));
    }
  }

  struct Group {
    double particles = 0.0;
    double volume = 0.0;
  };
  std::vector<Group> groups;
  std::map<std::string, std::size_t> index;
  double total_volume = 0.0;
  for (const auto& g : gases) {
    total_volume += g.volume;
    if (g.species) {
      auto [it, inserted] = index.try_emplace(*g.species, groups.size());
      if (inserted) groups.push_back({});
      groups[it->second].particles += g.particles;
      groups[it->second].volume += g.volume;
    } else {
      groups.push_back({g.particles, g.volume});
    }
  }
  double ds = 0.0;
  for (const auto& grp : groups) ds += grp.particles * std::log(total_volume / grp.volume);
  return ds;
}

// ---------------------------------------------------------------------------
// Distinguishability

/// Uhlmann fidelity d = [tr sqrt(sqrt(r1) r2 sqrt(r1))]^2, clamped to [0, 1].
/// The trace is the nuclear norm of sqrt(r1) sqrt(r2).
inline double distinguishability(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) throw DimensionMismatch("distinguishability: dimension mismatch");
  const auto s1 = matrix_sqrt(rho1);
  const auto s2 = matrix_sqrt(rho2);
  double tr = 0.0;
  for (double s : singular_values(s1.matrix() * s2.matrix())) tr += s;
  return std::clamp(tr * tr, 0.0, 1.0);
}

/// Closed form for qubits: (1 + n1.n2 + sqrt(1-|n1|^2) sqrt(1-|n2|^2)) / 2.
inline double bloch_distinguishability(const BlochState& a, const BlochState& b) {
  const double ra2 = std::min(1.0, dot(a.vector(), a.vector()));
  const double rb2 = std::min(1.0, dot(b.vector(), b.vector()));
  const double d =
      0.5 * (1.0 + dot(a.vector(), b.vector()) + std::sqrt(1.0 - ra2) * std::sqrt(1.0 - rb2));
  return std::clamp(d, 0.0, 1.0);
}

/// d/d|n1| of the qubit distinguishability at fixed |n2| and angle phi.
/// Singular at |n1| = 1.
inline double distinguishability_radial_derivative(double r1, double r2, double phi) {
  if (!(r1 >= 0.0 && r1 < 1.0 && r2 >= 0.0 && r2 <= 1.0)) {
    throw DomainError("radial derivative needs 0 <= |n1| < 1, 0 <= |n2| <= 1");
  }
  const double s1 = std::sqrt(1.0 - r1 * r1);
  const double s2 = std::sqrt(1.0 - r2 * r2);
  return (std::cos(phi) * r2 * s1 - r1 * s2) / (2.0 * s1);
}

/// tr[(rho1 - rho2)^2]
inline double hilbert_schmidt_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const ComplexMatrix diff = rho1.matrix() - rho2.matrix();
  const double f = diff.frobenius_norm();
  return f * f;
}

}  // namespace ergo
