#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "rbb/chain_model.hpp"
#include "rbb/markov_approx.hpp"
#include "rbb/rng.hpp"
#include "rbb/simulator.hpp"

using namespace rbb;

namespace {

Kernel two_row(double a, double b) {
  return Kernel::finite_order(2, 1, {a, 1 - a, b, 1 - b});
}

Kernel mixture_08() {
  return Kernel::geometric_mixture(2, 0.5, {0.8, 0.2, 0.2, 0.8});
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST(Alphabet, RejectsTooSmallOrLarge) {
  EXPECT_THROW(Alphabet(1), std::invalid_argument);
  EXPECT_THROW(Alphabet(65), std::invalid_argument);
  EXPECT_EQ(Alphabet(2).size(), 2);
  EXPECT_TRUE(Alphabet(3).contains(2));
  EXPECT_FALSE(Alphabet(3).contains(3));
}

TEST(Observable, RejectsNonFinite) {
  EXPECT_THROW(Observable({0.0, std::nan("")}), std::invalid_argument);
  EXPECT_THROW(Observable({0.0, std::numeric_limits<double>::infinity()}),
               std::invalid_argument);
  EXPECT_TRUE(Observable({2.0, 2.0}).is_constant());
  EXPECT_DOUBLE_EQ(Observable::identity(3).max_deviation(0.5), 1.5);
}

TEST(Kernel, ValidatesTables) {
  EXPECT_THROW(Kernel::finite_order(2, 1, {0.5, 0.4, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(Kernel::finite_order(2, 1, {1.1, -0.1, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(Kernel::finite_order(2, 2, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(Kernel::finite_order(2, 0, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(Kernel::geometric_mixture(2, 1.0, {0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(Kernel::geometric_mixture(2, 0.0, {0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(Kernel::geometric_mixture(2, 0.5, {0.5, 0.5}), std::invalid_argument);
  // Within the 1e-12 sum tolerance.
  EXPECT_NO_THROW(Kernel::finite_order(2, 1, {0.5 + 4e-13, 0.5, 0.5, 0.5}));
  EXPECT_THROW(Kernel::finite_order(2, 1, {0.5 + 1e-11, 0.5, 0.5, 0.5}), std::invalid_argument);
}

TEST(ConditionalDistribution, TableLookup) {
  const Kernel k = two_row(0.7, 0.4);
  const std::vector<Symbol> ctx{1, 1, 0};
  EXPECT_EQ(conditional_distribution(k, ctx), (std::vector<double>{0.7, 1 - 0.7}));
}

TEST(ConditionalDistribution, MixtureExtendsOldestSymbol) {
  const std::vector<Symbol> ctx{1, 0};
  const auto p = conditional_distribution(mixture_08(), ctx);
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.5, 1e-15);
}

TEST(ConditionalDistribution, ShortContextRejected) {
  const Kernel k = Kernel::finite_order(2, 2, {0.5, 0.5, 0.6, 0.4, 0.7, 0.3, 0.8, 0.2});
  const std::vector<Symbol> one{1};
  EXPECT_THROW(conditional_distribution(k, one), std::invalid_argument);
  EXPECT_THROW(conditional_distribution(mixture_08(), std::span<const Symbol>{}),
               std::invalid_argument);
  const std::vector<Symbol> bad{0, 2};
  EXPECT_THROW(conditional_distribution(mixture_08(), bad), std::invalid_argument);
}

TEST(ConditionalDistribution, AllZeroContextSumsToOne) {
  const std::vector<Symbol> zeros(12, 0);
  for (const Kernel& k : {two_row(0.7, 0.4), mixture_08(),
                          Kernel::geometric_mixture(3, 0.3, {0.2, 0.3, 0.5, 0.1, 0.1, 0.8,
                                                             1.0 / 3, 1.0 / 3, 1.0 / 3})}) {
    EXPECT_NEAR(sum(conditional_distribution(k, zeros)), 1.0, 1e-12);
  }
}

TEST(ConditionalDistribution, PropertyProbabilityAndDeltaBound) {
  const Kernel k = Kernel::geometric_mixture(3, 0.6, {0.2, 0.3, 0.5, 0.1, 0.1, 0.8,
                                                      0.3, 0.3, 0.4});
  const double delta = delta_lower_bound(k);
  Rng rng({11, 0});
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<Symbol> ctx(1 + rng.index(30));
    for (auto& s : ctx) s = static_cast<Symbol>(rng.index(3));
    const auto p = conditional_distribution(k, ctx);
    EXPECT_NEAR(sum(p), 1.0, 1e-12);
    for (double v : p) EXPECT_GE(v, delta - 1e-15);
  }
}

TEST(ConditionalDistribution, PropertyMixtureContinuity) {
  const Kernel k = Kernel::geometric_mixture(3, 0.5, {0.2, 0.3, 0.5, 0.1, 0.1, 0.8,
                                                      0.3, 0.3, 0.4});
  Rng rng({12, 0});
  for (int l = 1; l <= 4; ++l) {
    const double bound = continuity_rate(k, l);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t len = static_cast<std::size_t>(l) + 1 + rng.index(20);
      std::vector<Symbol> x(len), y(len);
      for (std::size_t i = 0; i < len; ++i) {
        x[i] = static_cast<Symbol>(rng.index(3));
        y[i] = static_cast<Symbol>(rng.index(3));
      }
      // Agree on the last l + 1 coordinates.
      for (int j = 0; j <= l; ++j) y[len - 1 - j] = x[len - 1 - j];
      const auto p = conditional_distribution(k, x);
      const auto q = conditional_distribution(k, y);
      for (int a = 0; a < 3; ++a) EXPECT_LE(std::abs(p[a] - q[a]), bound + 1e-15);
    }
  }
}

TEST(ConditionalDistribution, PropertyFiniteOrderIgnoresOlderSymbols) {
  std::vector<double> table;
  Rng rng({13, 0});
  for (int row = 0; row < 9; ++row) {
    const double a = 0.1 + 0.8 * rng.uniform();
    table.push_back(a * 0.5);
    table.push_back(a * 0.5);
    table.push_back(1 - a);
  }
  const Kernel k = Kernel::finite_order(3, 2, table);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Symbol> x(2 + rng.index(10));
    for (auto& s : x) s = static_cast<Symbol>(rng.index(3));
    auto y = x;
    for (std::size_t i = 0; i + 2 < y.size(); ++i) y[i] = static_cast<Symbol>(rng.index(3));
    EXPECT_EQ(conditional_distribution(k, x), conditional_distribution(k, y));
  }
}

TEST(DeltaLowerBound, Examples) {
  EXPECT_DOUBLE_EQ(delta_lower_bound(mixture_08()), 0.2);
  EXPECT_DOUBLE_EQ(delta_lower_bound(two_row(0.7, 0.4)), 0.3);
  EXPECT_DOUBLE_EQ(delta_lower_bound(two_row(0.5, 0.5)), 0.5);
}

TEST(ContinuityRate, Examples) {
  EXPECT_NEAR(continuity_rate(mixture_08(), 2), 0.15, 1e-15);
  for (int l = 1; l < 6; ++l) {
    EXPECT_EQ(continuity_rate(two_row(0.7, 0.4), l), 0.0);
    EXPECT_LE(continuity_rate(mixture_08(), l + 1), continuity_rate(mixture_08(), l));
  }
  EXPECT_THROW(continuity_rate(mixture_08(), 0), std::invalid_argument);
}

TEST(ContinuityRate, FiniteOrderBelowOrderIsExactSpread) {
  // Order 2: rows for contexts 00, 01, 10, 11. Pasts agreeing on the last
  // symbol differ only through the older one.
  const Kernel k = Kernel::finite_order(2, 2, {0.9, 0.1, 0.6, 0.4, 0.5, 0.5, 0.2, 0.8});
  EXPECT_NEAR(continuity_rate(k, 1), 0.4, 1e-15);  // max(|0.9-0.5|, |0.6-0.2|)
  EXPECT_EQ(continuity_rate(k, 2), 0.0);
}

TEST(MixingExponent, Examples) {
  EXPECT_NEAR(mixing_exponent(mixture_08()), 0.693147, 1e-6);
  const Kernel k = Kernel::geometric_mixture(2, std::exp(-13.0), {0.8, 0.2, 0.2, 0.8});
  EXPECT_NEAR(mixing_exponent(k), 13.0, 1e-12);
  EXPECT_TRUE(std::isinf(mixing_exponent(two_row(0.7, 0.4))));
}

TEST(LongRunVariance, FairCoinIsBernoulliVariance) {
  const Kernel coin = two_row(0.5, 0.5);
  const Trajectory t = sample_infinite_order_trajectory(coin, 100'000, 0, {21, 0});
  EXPECT_NEAR(long_run_variance_estimate(t.symbols, Observable::identity(2), 0), 0.25, 0.01);
}

TEST(LongRunVariance, ConstantIsExactlyZero) {
  const Trajectory t = sample_infinite_order_trajectory(two_row(0.5, 0.5), 1000, 0, {22, 0});
  EXPECT_EQ(long_run_variance_estimate(t.symbols, Observable({3.0, 3.0}), 5), 0.0);
}

TEST(LongRunVariance, PersistentChain) {
  const Kernel k = two_row(0.9, 0.1);
  const Trajectory t = sample_infinite_order_trajectory(k, 1'000'000, 1000, {23, 0});
  EXPECT_NEAR(long_run_variance_estimate(t.symbols, Observable::identity(2), 50), 2.25, 0.15);
}

TEST(LongRunVariance, TooShortRejected) {
  const std::vector<Symbol> x(20, 0);
  EXPECT_THROW(long_run_variance_estimate(x, Observable::identity(2), 1), std::invalid_argument);
  EXPECT_NO_THROW(long_run_variance_estimate(x, Observable::identity(2), 0));
}

TEST(Hypotheses, FlagsFollowDefinitions) {
  const auto h = check_hypotheses(mixture_08(), 0.3);
  EXPECT_TRUE(h.h1_ok && h.h2_ok && h.h3_ok);
  EXPECT_DOUBLE_EQ(h.delta, 0.2);
  const auto d = check_hypotheses(two_row(0.7, 0.4), 0.0);
  EXPECT_FALSE(d.h3_ok);
  EXPECT_TRUE(std::isinf(d.c));
}
