#pragma once

// Randomized searches for the two counterexamples: a positive instrument gap
// (coarse instruments extracting more mixing work) and a violation of
// monotonicity in the degree of mixing for qubit gases.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ergo/ergo.hpp"

namespace ergo::cli {

inline constexpr double kBalanceTolerance = 1e-9;

struct GapInstance {
  std::uint64_t trial = 0;
  std::vector<double> weights;
  std::vector<BlochState> states;
  double delta_w = 0.0;
  double delta_w_restricted = 0.0;
  double gap = 0.0;
  double balance = 0.0;  // sum_a lambda_a n_{3,a}
};

struct GapSearchResult {
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t valid = 0;     // trials whose last state stayed inside the ball
  std::uint64_t positive = 0;  // valid trials with gap > 0
  std::optional<GapInstance> best;
};

/// Each trial draws M in {2,3,4}, flat Dirichlet weights, M-1 Bloch vectors
/// uniform in the ball, and a last vector whose n_3 cancels the weighted n_3
/// sum. Trials where that vector leaves the ball are discarded.
inline GapSearchResult search_instrument_gap(std::uint64_t seed, std::uint64_t trials,
                                             double epsilon = 1.0) {
  GapSearchResult res;
  res.seed = seed;
  res.trials = trials;
  Rng rng = make_rng(Seed{seed});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick_m(2, 4);
  auto in_ball = [&] {
    const double z = 2.0 * u(rng) - 1.0;
    const double az = 2.0 * M_PI * u(rng);
    const double r = std::cbrt(u(rng));
    const double s = std::sqrt(1.0 - z * z);
    return Vec3{r * s * std::cos(az), r * s * std::sin(az), r * z};
  };

  for (std::uint64_t t = 0; t < trials; ++t) {
    const int m = pick_m(rng);
    const auto w = sample_probabilities(static_cast<std::size_t>(m), rng);
    std::vector<Vec3> v;
    double partial = 0.0;
    for (int a = 0; a + 1 < m; ++a) {
      v.push_back(in_ball());
      partial += w[a] * v.back()[2];
    }
    Vec3 last = in_ball();
    last[2] = -partial / w[m - 1];
    if (norm(last) > 1.0) continue;
    v.push_back(last);
    ++res.valid;

    std::vector<BlochState> states(v.begin(), v.end());
    double balance = 0.0;
    for (int a = 0; a < m; ++a) balance += w[a] * v[a][2];
    if (std::abs(balance) > kBalanceTolerance) continue;

    const double dw = bloch_mixing_ergotropy(states, w, epsilon);
    const double dwr = bloch_restricted_mixing_ergotropy(states, w, epsilon);
    const double gap = dwr - dw;
    if (!(gap > 0.0)) continue;
    ++res.positive;
    if (!res.best || gap > res.best->gap) {
      res.best = GapInstance{t, w, std::move(states), dw, dwr, gap, balance};
    }
  }
  return res;
}

struct ViolationInstance {
  std::uint64_t trial = 0;
  double lambda1 = 0.0;
  double mu1 = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double phi = 0.0;
  double dw_lambda = 0.0;
  double dw_mu = 0.0;
  double excess = 0.0;  // dw_lambda - dw_mu, positive for a violation
  double first_order_margin = 0.0;
};

struct ViolationSearchResult {
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  bool pure_only = false;
  std::uint64_t violations = 0;
  std::uint64_t predicted = 0;  // violations the first-order margin also flags
  std::optional<ViolationInstance> best;
};

/// Samples mu1 in [1/2, 1], lambda1 in [mu1, 1], |n2| in (0, 1], |n1| in
/// [0, |n2|] and phi in [0, pi]; n1 along z, n2 in the xz-plane. With
/// pure_only both vectors are unit length.
inline ViolationSearchResult search_monotonicity_violation(std::uint64_t seed,
                                                           std::uint64_t trials,
                                                           bool pure_only = false) {
  ViolationSearchResult res;
  res.seed = seed;
  res.trials = trials;
  res.pure_only = pure_only;
  Rng rng = make_rng(Seed{seed});
  std::uniform_real_distribution<double> u(0.0, 1.0);

  for (std::uint64_t t = 0; t < trials; ++t) {
    const double mu1 = 0.5 + 0.5 * u(rng);
    const double l1 = mu1 + (1.0 - mu1) * u(rng);
    double r2 = 1.0 - u(rng);
    double r1 = r2 * u(rng);
    const double phi = M_PI * u(rng);
    if (pure_only) r1 = r2 = 1.0;

    const auto pair = bloch_pair(r1, r2, phi);
    const auto d = quantum_monotonicity_violation({l1, 1.0 - l1}, {mu1, 1.0 - mu1}, pair[0], pair[1]);
    if (d.holds) continue;
    ++res.violations;
    const double margin = first_order_margin(l1, mu1, r1 / r2);
    if (margin < 0.0) ++res.predicted;
    const double excess = d.dw_lambda - d.dw_mu;
    if (!res.best || excess > res.best->excess) {
      res.best = ViolationInstance{t, l1, mu1, r1, r2, phi, d.dw_lambda, d.dw_mu, excess, margin};
    }
  }
  return res;
}

}  // namespace ergo::cli
