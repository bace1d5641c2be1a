#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "shapiq/sampling.hpp"
#include "shapiq/welford.hpp"

using namespace shapiq;

TEST(SamplingOrder, BudgetCoversPowerset) {
  const auto plan = determine_sampling_order(sampling_weights(4, SamplingScheme::ShapleyKernel), 30);
  EXPECT_TRUE(plan.sampling_range_empty());
  EXPECT_EQ(plan.deterministic_count, 16u);
  EXPECT_EQ(plan.budget_remaining, 14u);
  for (int t = 0; t <= 4; ++t) EXPECT_TRUE(plan.is_deterministic_size(t));
}

TEST(SamplingOrder, ExactPowersetBudgetEnumeratesEverything) {
  for (int d = 2; d <= 12; ++d) {
    const auto plan = determine_sampling_order(sampling_weights(d, SamplingScheme::ShapleyKernel),
                                               std::uint64_t{1} << d);
    EXPECT_TRUE(plan.sampling_range_empty()) << d;
    EXPECT_EQ(plan.budget_remaining, 0u);
  }
}

TEST(SamplingOrder, ZeroBudget) {
  const auto q = sampling_weights(4, SamplingScheme::ShapleyKernel);
  const auto plan = determine_sampling_order(q, 0);
  EXPECT_EQ(plan.k0, 0);
  EXPECT_EQ(plan.deterministic_count, 0u);
  EXPECT_NEAR(std::accumulate(plan.p_size.begin(), plan.p_size.end(), 0.0), 1.0, 1e-12);
  // Tail sizes borrow the weight of their inner neighbour.
  const double r = q.q[1] * 1 + q.q[1] * 4 + q.q[2] * 6 + q.q[3] * 4 + q.q[3] * 1;
  EXPECT_NEAR(plan.p_size[0], q.q[1] / r, 1e-15);
  EXPECT_NEAR(plan.p_size[2], 6 * q.q[2] / r, 1e-15);
}

// Constants from hand-executing the search with exact rationals.
TEST(SamplingOrder, RegressionConstants) {
  const auto q14 = sampling_weights(14, SamplingScheme::ShapleyKernel);
  const auto full = determine_sampling_order(q14, 1 << 14);
  EXPECT_EQ(full.k0, 8);
  EXPECT_EQ(full.budget_remaining, 0u);
  const auto part = determine_sampling_order(q14, 1 << 12);
  EXPECT_EQ(part.k0, 4);
  EXPECT_EQ(part.budget_remaining, 3156u);
  const auto small = determine_sampling_order(sampling_weights(8, SamplingScheme::ShapleyKernel), 64);
  EXPECT_EQ(small.k0, 2);
  EXPECT_EQ(small.budget_remaining, 46u);
  const auto mid = determine_sampling_order(sampling_weights(10, SamplingScheme::ShapleyKernel), 1000);
  EXPECT_EQ(mid.k0, 5);
  EXPECT_EQ(mid.budget_remaining, 228u);
}

TEST(SamplingOrder, PlanInvariants) {
  for (int d : {5, 8, 13, 30}) {
    for (std::uint64_t budget : {2ULL, 50ULL, 700ULL, 16384ULL}) {
      const auto plan = determine_sampling_order(sampling_weights(d, SamplingScheme::ShapleyKernel), budget);
      EXPECT_GE(plan.k0, 1);
      EXPECT_EQ(plan.deterministic_count + plan.budget_remaining, budget);
      double border = 0;
      for (int t : plan.deterministic_sizes()) border += binom(d, t);
      EXPECT_EQ(static_cast<std::uint64_t>(border), plan.deterministic_count);
      if (!plan.sampling_range_empty()) {
        EXPECT_NEAR(std::accumulate(plan.p_size.begin(), plan.p_size.end(), 0.0), 1.0, 1e-12);
        for (int t = 0; t <= d; ++t) {
          if (plan.is_deterministic_size(t)) EXPECT_EQ(plan.p_size[static_cast<std::size_t>(t)], 0.0);
          else EXPECT_GT(plan.p_size[static_cast<std::size_t>(t)], 0.0);
        }
      }
    }
  }
}

TEST(SamplingOrder, SiiTailPromotesTailsFirst) {
  const int d = 10;
  const auto q = sampling_weights(d, SamplingScheme::SiiTail, 2);
  const auto plan = determine_sampling_order(q, 2 + 2 * 10 + 50);
  EXPECT_GE(plan.k0, 2);
}

TEST(SamplingOrder, FixedOrderPlan) {
  const auto q = sampling_weights(8, SamplingScheme::ShapleyKernel);
  const auto plan = fixed_order_plan(q, 1, 200);
  EXPECT_EQ(plan.k0, 1);
  EXPECT_EQ(plan.deterministic_count, 2u);
  EXPECT_EQ(plan.budget_remaining, 198u);
  EXPECT_THROW(fixed_order_plan(q, 2, 10), InsufficientBudget);
}

TEST(Sampler, SingleSize) {
  const auto plan = fixed_order_plan(sampling_weights(6, SamplingScheme::ShapleyKernel), 3, 100);
  CoalitionSampler sampler(plan, 5);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sampler.next().size(), 3);
}

TEST(Sampler, EmptyRangeRejected) {
  const auto plan = determine_sampling_order(sampling_weights(4, SamplingScheme::ShapleyKernel), 30);
  Rng rng(1);
  EXPECT_THROW(sample_coalition(plan, rng), PreconditionError);
  EXPECT_THROW(CoalitionSampler(plan, 1), PreconditionError);
}

TEST(Sampler, SizeFrequenciesMatchPlan) {
  const int d = 10;
  const auto plan = fixed_order_plan(sampling_weights(d, SamplingScheme::ShapleyKernel), 1, 100);
  CoalitionSampler sampler(plan, 2024);
  const int n = 100000;
  std::vector<int> counts(static_cast<std::size_t>(d) + 1, 0);
  for (int i = 0; i < n; ++i) {
    const Coalition t = sampler.next();
    ASSERT_TRUE(t.valid_for(d));
    ++counts[static_cast<std::size_t>(t.size())];
  }
  for (int t = 0; t <= d; ++t) {
    const double p = plan.p_size[static_cast<std::size_t>(t)];
    const double sd = std::sqrt(n * p * (1 - p));
    EXPECT_LE(std::abs(counts[static_cast<std::size_t>(t)] - n * p), 3 * sd + 1e-9) << "t=" << t;
  }
}

TEST(Sampler, UniformWithinSize) {
  const auto plan = fixed_order_plan(sampling_weights(5, SamplingScheme::ShapleyKernel), 2, 100);
  ASSERT_EQ(plan.p_size[2] + plan.p_size[3], 1.0);
  CoalitionSampler sampler(plan, 77);
  std::map<Mask, int> counts;
  int n = 0;
  while (n < 100000) {
    const Coalition t = sampler.next();
    if (t.size() != 2) continue;
    ++counts[t.mask];
    ++n;
  }
  ASSERT_EQ(counts.size(), 10u);
  double chi2 = 0;
  for (const auto& [mask, c] : counts) chi2 += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
  EXPECT_LT(chi2, 21.666);  // chi-square 0.99 quantile, 9 degrees of freedom
}

TEST(Sampler, StreamIsFunctionOfSeed) {
  const auto plan = fixed_order_plan(sampling_weights(12, SamplingScheme::ShapleyKernel), 1, 100);
  CoalitionSampler a(plan, 9);
  CoalitionSampler b(plan, 9);
  CoalitionSampler c(plan, 10);
  int same = 0;
  for (int i = 0; i < 200; ++i) {
    const Coalition x = a.next();
    EXPECT_EQ(x, b.next());
    same += (x == c.next());
  }
  EXPECT_LT(same, 50);
}

TEST(Welford, HandExecuted) {
  WelfordState w(1);
  for (double x : {1.0, 2.0, 3.0}) w.update(std::vector<double>{x});
  EXPECT_EQ(w.n, 3u);
  EXPECT_DOUBLE_EQ(w.mean[0], 2.0);
  EXPECT_DOUBLE_EQ(w.s2[0], 2.0);
  EXPECT_DOUBLE_EQ(w.variance()[0], 1.0);
}

TEST(Welford, SingleAndConstant) {
  WelfordState one = welford_update(WelfordState(2), std::vector<double>{4.5, -1.0});
  EXPECT_EQ(one.mean, (std::vector<double>{4.5, -1.0}));
  EXPECT_EQ(one.s2, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(one.variance(), (std::vector<double>{0.0, 0.0}));

  WelfordState c(1);
  for (int i = 0; i < 50; ++i) c.update(std::vector<double>{0.1});
  EXPECT_NEAR(c.variance()[0], 0.0, 1e-30);
  EXPECT_THROW(c.update(std::vector<double>{1.0, 2.0}), PreconditionError);
}

TEST(Welford, MatchesTwoPass) {
  Rng rng(3);
  std::vector<double> xs(1000);
  for (auto& x : xs) x = 1e6 + rng.uniform();
  WelfordState w(1);
  for (double x : xs) w.update(std::vector<double>{x});
  long double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  long double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  EXPECT_NEAR(w.mean[0], static_cast<double>(mean), 1e-9);
  EXPECT_NEAR(w.variance()[0], static_cast<double>(ss / (xs.size() - 1)), 1e-9);
}
