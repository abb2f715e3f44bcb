#include <gtest/gtest.h>

#include <cmath>

#include "ergo/majorization.hpp"
#include "ergo/oracle.hpp"
#include "support/random_states.hpp"

using namespace ergo;
using ergo::testing::random_hamiltonian;
using ergo::testing::random_probabilities;

namespace {

// Apply a random T-transform (convex mix of identity and a transposition);
// the result is always majorized by the input.
std::vector<double> t_transform(std::vector<double> v, Rng& rng) {
  if (v.size() < 2) return v;
  std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
  std::size_t i = pick(rng), j = pick(rng);
  if (i == j) j = (i + 1) % v.size();
  const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double vi = v[i], vj = v[j];
  v[i] = t * vi + (1 - t) * vj;
  v[j] = t * vj + (1 - t) * vi;
  return v;
}

WeightVector normalized(std::vector<double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
  return WeightVector(std::move(v));
}

BlochState polar_state(double r, double phi) {
  return BlochState(r * std::sin(phi), 0.0, r * std::cos(phi));
}

}  // namespace

TEST(WeightVector, Validation) {
  EXPECT_THROW(WeightVector({0.5, 0.6}), WeightError);
  EXPECT_THROW(WeightVector({1.2, -0.2}), WeightError);
  EXPECT_THROW(WeightVector(std::vector<double>{}), WeightError);
  EXPECT_NO_THROW(WeightVector({0.25, 0.75}));
}

TEST(Majorizes, Examples) {
  EXPECT_TRUE(majorizes({1.0, 0.0}, {0.3, 0.7}));
  EXPECT_TRUE(majorizes({1.0, 0.0}, {0.5, 0.5}));
  EXPECT_TRUE(majorizes({0.2, 0.5, 0.3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
  const WeightVector a{0.6, 0.2, 0.2}, b{0.5, 0.45, 0.05};
  EXPECT_FALSE(majorizes(a, b));
  EXPECT_FALSE(majorizes(b, a));
}

TEST(Majorizes, ZeroPadding) {
  EXPECT_TRUE(majorizes({0.5, 0.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3}));
  EXPECT_FALSE(majorizes({1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.5, 0.5}));
}

TEST(Majorizes, PreorderProperties) {
  Rng rng(61);
  int triples = 0;
  for (int t = 0; t < 20000 && triples < 1000; ++t) {
    const std::size_t n = 2 + t % 4;
    const WeightVector a(random_probabilities(n, rng));
    ASSERT_TRUE(majorizes(a, a));
    const WeightVector b(t_transform(a.entries(), rng));
    const WeightVector c(t_transform(b.entries(), rng));
    ASSERT_TRUE(majorizes(a, b));
    ASSERT_TRUE(majorizes(b, c));
    ASSERT_TRUE(majorizes(a, c));
    ++triples;
    // Independent draws: check transitivity whenever the premises hold.
    const WeightVector x(random_probabilities(n, rng)), y(random_probabilities(n, rng));
    const WeightVector z(random_probabilities(n, rng));
    if (majorizes(x, y) && majorizes(y, z)) ASSERT_TRUE(majorizes(x, z));
    if (majorizes(x, y) && majorizes(y, x)) {
      const auto xs = x.sorted_non_increasing(), ys = y.sorted_non_increasing();
      for (std::size_t k = 0; k < n; ++k) ASSERT_NEAR(xs[k], ys[k], 1e-12);
    }
  }
  EXPECT_EQ(triples, 1000);
}

TEST(Majorizes, AntisymmetricUpToSorting) {
  const WeightVector a{0.1, 0.6, 0.3}, b{0.6, 0.3, 0.1};
  EXPECT_TRUE(majorizes(a, b));
  EXPECT_TRUE(majorizes(b, a));
}

TEST(Majorizes, EntropyOrderAtTwoComponents) {
  Rng rng(62);
  for (int t = 0; t < 1000; ++t) {
    const WeightVector l(random_probabilities(2, rng)), m(random_probabilities(2, rng));
    if (majorizes(l, m)) ASSERT_LE(binary_entropy(l[1]), binary_entropy(m[1]) + 1e-12);
  }
}

TEST(QuasiClassical, Examples) {
  const double e[] = {0.0, 1.0};
  const auto h = HermitianOperator::diagonal(e);
  const auto none = quasiclassical_mixing_monotone({1.0, 0.0}, {0.3, 0.7}, h);
  EXPECT_EQ(none.dw_lambda, 0.0);
  EXPECT_GE(none.dw_mu, 0.0);

  const auto same = quasiclassical_mixing_monotone({0.3, 0.7}, {0.3, 0.7}, h);
  EXPECT_EQ(same.dw_lambda, same.dw_mu);

  const auto hundred = quasiclassical_mixing_monotone({199.0 / 200, 1.0 / 200}, {0.5, 0.5}, h);
  // (eps/2)(1 - |lambda1 - lambda2|) with antipodal unit Bloch vectors.
  EXPECT_NEAR(hundred.dw_mu, 0.5, 1e-12);
  EXPECT_NEAR(hundred.dw_lambda, 0.5 * (1.0 - 198.0 / 200), 1e-12);
  EXPECT_NEAR(hundred.dw_lambda, 0.005, 1e-12);
}

TEST(QuasiClassical, Preconditions) {
  const double e[] = {0.0, 1.0};
  const auto h = HermitianOperator::diagonal(e);
  EXPECT_THROW(quasiclassical_mixing_monotone({0.5, 0.5}, {0.9, 0.1}, h), PreconditionError);
  EXPECT_THROW(quasiclassical_mixing_monotone({0.5, 0.3, 0.2}, {0.4, 0.3, 0.3}, h),
               PreconditionError);
}

TEST(QuasiClassical, MonotoneOnRandomInstances) {
  Rng rng(63);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + t % 5;
    const std::size_t m = 2 + t % (n - 1);
    const auto h = random_hamiltonian(n, rng);
    const WeightVector l(random_probabilities(m, rng));
    auto mu_entries = t_transform(l.entries(), rng);
    mu_entries = t_transform(mu_entries, rng);
    const WeightVector mu = normalized(mu_entries);
    if (!majorizes(l, mu)) continue;  // guard against rounding at the boundary
    const auto pair = t % 2 == 0 ? quasiclassical_mixing_monotone(l, mu, h)
                                 : quasiclassical_mixing_monotone(l, mu, h,
                                                                  sample_haar_unitary(n, rng));
    ASSERT_GE(pair.dw_mu, pair.dw_lambda - 1e-10) << t;
  }
}

TEST(QuasiClassical, InvariantUnderPermutedEigenbasis) {
  Rng rng(64);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 4;
    const auto h = random_hamiltonian(n, rng);
    const auto levels = decompose(h, Ordering::ascending);
    ComplexMatrix permuted(n);
    const std::size_t order[] = {2, 0, 3, 1};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) permuted(i, k) = levels.eigenvectors(i, order[k]);
    const WeightVector l{0.5, 0.3, 0.2}, mu{0.4, 0.35, 0.25};
    const auto a = quasiclassical_mixing_monotone(l, mu, h);
    const auto b = quasiclassical_mixing_monotone(l, mu, h, permuted);
    ASSERT_NEAR(a.dw_lambda, b.dw_lambda, 1e-10);
    ASSERT_NEAR(a.dw_mu, b.dw_mu, 1e-10);
  }
}

TEST(FirstOrderMargin, Examples) {
  EXPECT_TRUE(first_order_monotone_check(0.8, 0.7, 1.0));
  EXPECT_NEAR(first_order_margin(0.8, 0.7, 1.0), 0.5, 1e-15);
  EXPECT_FALSE(first_order_monotone_check(0.8, 0.7, 0.05));
  EXPECT_NEAR(first_order_margin(0.8, 0.7, 0.05), 1.5 - 1.532, 1e-15);
  EXPECT_TRUE(first_order_monotone_check(0.5, 0.5, 1.0));
  EXPECT_THROW(first_order_margin(0.8, 0.7, 1.5), DomainError);
  EXPECT_THROW(first_order_margin(1.2, 0.7, 0.5), DomainError);
}

TEST(QuantumMonotonicity, FixedViolation) {
  const auto d = quantum_monotonicity_violation({0.8, 0.2}, {0.7, 0.3}, polar_state(0.05, 0.0),
                                                polar_state(1.0, 0.2));
  EXPECT_FALSE(d.holds);
  EXPECT_LT(d.dw_mu, d.dw_lambda);
  EXPECT_NEAR(d.dw_lambda, 0.000332685, 1e-9);
  EXPECT_NEAR(d.dw_mu, 0.000312681, 1e-9);
}

TEST(QuantumMonotonicity, EqualWeightsHold) {
  const auto d = quantum_monotonicity_violation({0.7, 0.3}, {0.7, 0.3}, polar_state(0.3, 0.0),
                                                polar_state(0.9, 1.0));
  EXPECT_TRUE(d.holds);
  EXPECT_EQ(d.dw_lambda, d.dw_mu);
}

TEST(QuantumMonotonicity, Preconditions) {
  const BlochState a(0, 0, 1), b(1, 0, 0);
  EXPECT_THROW(quantum_monotonicity_violation({0.6, 0.4}, {0.7, 0.3}, a, b), PreconditionError);
  EXPECT_THROW(quantum_monotonicity_violation({0.4, 0.6}, {0.3, 0.7}, a, b), PreconditionError);
  EXPECT_THROW(quantum_monotonicity_violation({0.5, 0.3, 0.2}, {0.4, 0.3, 0.3}, a, b),
               PreconditionError);
}

TEST(QuantumMonotonicity, PurePairsNeverViolate) {
  Rng rng(65);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    const double mu1 = 0.5 + 0.5 * u(rng);
    const double l1 = mu1 + (1.0 - mu1) * u(rng);
    const auto d = quantum_monotonicity_violation({l1, 1 - l1}, {mu1, 1 - mu1},
                                                  polar_state(1.0, 0.0),
                                                  polar_state(1.0, M_PI * u(rng)));
    ASSERT_TRUE(d.holds) << t;
  }
}

// The first-order predictor should match the exact diagnosis at small angles
// away from its own boundary.
TEST(QuantumMonotonicity, FirstOrderPredictorAtSmallAngles) {
  Rng rng(66);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int compared = 0;
  for (int t = 0; t < 5000; ++t) {
    const double mu1 = 0.5 + 0.5 * u(rng);
    const double l1 = mu1 + (1.0 - mu1) * u(rng);
    const double r2 = 0.1 + 0.9 * u(rng);
    const double r1 = r2 * u(rng);
    const double phi = 0.05 * (0.01 + 0.99 * u(rng));
    const double margin = first_order_margin(l1, mu1, r1 / r2);
    if (std::abs(margin) < 5e-3) continue;
    const auto d = quantum_monotonicity_violation({l1, 1 - l1}, {mu1, 1 - mu1},
                                                  polar_state(r1, 0.0), polar_state(r2, phi));
    ASSERT_EQ(d.holds, margin >= 0.0) << "l1=" << l1 << " mu1=" << mu1 << " r1=" << r1
                                      << " r2=" << r2 << " phi=" << phi;
    ++compared;
  }
  EXPECT_GT(compared, 4000);
}
