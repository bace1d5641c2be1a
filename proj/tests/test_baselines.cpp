#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "shapiq/baselines.hpp"
#include "shapiq/exact.hpp"
#include "shapiq/nsii.hpp"

using namespace shapiq;

namespace {

TabularGame additive(int d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> w(static_cast<std::size_t>(d));
  for (auto& x : w) x = rng.uniform() - 0.5;
  std::vector<double> v(std::size_t{1} << d, 0.25);
  for (std::size_t m = 0; m < v.size(); ++m) {
    for (int i = 0; i < d; ++i) {
      if ((m >> i) & 1U) v[m] += w[static_cast<std::size_t>(i)];
    }
  }
  return TabularGame(d, v);
}

}  // namespace

TEST(PbSii, PermutationCost) {
  EXPECT_EQ(pb_sii_permutation_cost(14, 2), 80u);
  EXPECT_EQ(pb_sii_permutation_cost(5, 1), 10u);
  const auto g = soum_random(14, 5, 1, 14);
  EXPECT_THROW(pb_sii(g, 2, 79, 0), InsufficientBudget);
  const auto r = pb_sii(g, 2, 80 * 3 + 79, 0);
  EXPECT_EQ(r.budget_used, 240u);
  EXPECT_EQ(r.samples_drawn, 3u);
}

TEST(PbSii, AdditiveGameHasNoInteractions) {
  const auto g = additive(7, 2);
  const auto r = pb_sii(g, 3, 5000, 4);
  for (std::size_t i = 0; i < r.scores.size(); ++i) {
    if (r.scores.subsets()[i].size() >= 2) EXPECT_NEAR(r.scores.at(i), 0.0, 1e-12);
  }
}

TEST(PbSii, ExpectationWithinStandardErrors) {
  const int d = 6;
  const auto v = oracle::random_table(d, 17);
  const TabularGame g(d, v);
  const int s0 = 2;
  const auto cost = pb_sii_permutation_cost(d, s0);
  const auto r = pb_sii(g, s0, 2000 * cost, 8);
  EXPECT_EQ(r.samples_drawn, 2000u);
  const oracle::u64 all = (oracle::u64{1} << d) - 1;
  for (std::size_t i = 0; i < r.scores.size(); ++i) {
    const oracle::u64 s = r.scores.subsets()[i].mask;
    const int order = oracle::pc(s);
    // Given S is a window, T is distributed with the SII weights; variance from enumeration.
    long double mean = 0;
    long double second = 0;
    const oracle::u64 rest = all & ~s;
    for (oracle::u64 t = rest;; t = (t - 1) & rest) {
      const long double p = oracle::sii_weight(d, order, oracle::pc(t));
      const long double x = oracle::derivative(v, s, t);
      mean += p * x;
      second += p * x * x;
      if (t == 0) break;
    }
    ASSERT_GT(r.counts[i], 0u);
    const double se = std::sqrt(static_cast<double>(second - mean * mean) / static_cast<double>(r.counts[i]));
    EXPECT_LE(std::abs(r.scores.at(i) - static_cast<double>(mean)), 4 * se + 1e-12) << i;
  }
}

TEST(PbSii, UnvisitedSubsetsReportZero) {
  const auto g = soum_random(20, 30, 5, 20);
  const auto r = pb_sii(g, 2, pb_sii_permutation_cost(20, 2), 1);
  std::uint64_t zero_counts = 0;
  for (std::size_t i = 0; i < r.scores.size(); ++i) {
    if (r.counts[i] == 0) {
      ++zero_counts;
      EXPECT_EQ(r.scores.at(i), 0.0);
    }
  }
  EXPECT_EQ(zero_counts, 190u - 19u);
  EXPECT_EQ(r.extras.at("unvisited_subsets"), static_cast<double>(zero_counts));
}

TEST(PbSti, PermutationCost) {
  EXPECT_EQ(pb_sti_permutation_cost(14, 3), 2912u);
  EXPECT_EQ(pb_sti_lower_cost(14, 3), 1u + 14u + 91u);
  const auto g = soum_random(8, 5, 1, 8);
  EXPECT_THROW(pb_sti(g, 2, pb_sti_lower_cost(8, 2) + pb_sti_permutation_cost(8, 2) - 1, 0), InsufficientBudget);
}

TEST(PbSti, EfficiencyForEveryRun) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int d = 6 + static_cast<int>(seed % 4);
    const auto g = soum_random(d, 12, seed, d);
    for (int s0 = 2; s0 <= 3; ++s0) {
      const auto r = pb_sti(g, s0, 3000, seed);
      EXPECT_NEAR(r.scores.sum(), eval_shifted(g, Coalition::full(d)), 1e-8);
      EXPECT_LE(r.budget_used, 3000u);
      EXPECT_LE(r.extras.at("budget_used_with_reuse"), static_cast<double>(r.budget_used));
    }
  }
}

TEST(PbSti, LowerOrdersExactAndSeedIndependent) {
  const auto g = soum_random(8, 10, 3, 8);
  const IndexKind kind(Index::STI, 3);
  const auto truth = exact_cii_representation(g, kind);
  const auto a = pb_sti(g, 3, 2000, 1);
  const auto b = pb_sti(g, 3, 2000, 2);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth.subsets()[i].size() == 3) continue;
    EXPECT_EQ(a.scores.at(i), b.scores.at(i));
    EXPECT_NEAR(a.scores.at(i), truth.at(i), 1e-12);
  }
}

TEST(PbSti, UnanimityConverges) {
  const int d = 6;
  const Coalition q = Coalition::from_players({1, 4});
  const SoumGame g(d, {{q, 1.0}});
  const auto truth = exact_cii_representation(g, {Index::STI, 2});
  const auto r = pb_sti(g, 2, pb_sti_lower_cost(d, 2) + 4000 * pb_sti_permutation_cost(d, 2), 6);
  // δ_Q(T) = 1 for every T, so the top order is exact for S = Q.
  EXPECT_NEAR(r.scores[q], truth[q], 1e-12);
  EXPECT_NEAR(max_abs_difference(r.scores, truth), 0.0, 1e-12);
}

TEST(PbSti, ExpectationMatchesExact) {
  const int d = 6;
  const TabularGame g(d, oracle::random_table(d, 3));
  const auto truth = exact_cii_representation(g, {Index::STI, 2});
  const auto r = pb_sti(g, 2, pb_sti_lower_cost(d, 2) + 20000 * pb_sti_permutation_cost(d, 2), 9);
  EXPECT_LT(max_abs_difference(r.scores, truth), 0.05);
}

TEST(Baselines, ScaleEquivariance) {
  const auto v = oracle::random_table(7, 5);
  std::vector<double> scaled(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = 3.0 * v[i];
  const TabularGame g(7, v);
  const TabularGame h(7, scaled);
  const auto a = pb_sii(g, 2, 3000, 4);
  const auto b = pb_sii(h, 2, 3000, 4);
  for (std::size_t i = 0; i < a.scores.size(); ++i) EXPECT_NEAR(b.scores.at(i), 3.0 * a.scores.at(i), 1e-12);
  const auto c = pb_sti(g, 2, 3000, 4);
  const auto e = pb_sti(h, 2, 3000, 4);
  for (std::size_t i = 0; i < c.scores.size(); ++i) EXPECT_NEAR(e.scores.at(i), 3.0 * c.scores.at(i), 1e-12);
}

TEST(KbFsi, ExhaustiveBudgetMatchesExact) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = soum_random(8, 10, seed, 8);
    for (int s0 = 1; s0 <= 3; ++s0) {
      const auto r = kb_fsi(g, s0, 256, seed);
      EXPECT_EQ(r.samples_drawn, 0u);
      const auto truth = exact_cii_representation(g, {Index::FSI, s0});
      for (std::size_t i : truth.order_slice(s0)) {
        EXPECT_NEAR(r.scores[truth.subsets()[i]], truth.at(i), 1e-6);
      }
    }
  }
}

TEST(KbFsi, ConstraintGivesEfficiency) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int d = 8 + static_cast<int>(seed % 5);
    const auto g = soum_random(d, 15, seed, d);
    const auto r = kb_fsi(g, 2, 150, seed);
    EXPECT_NEAR(r.scores.sum(), eval_shifted(g, Coalition::full(d)), 1e-6);
    EXPECT_LE(r.budget_used, 150u);
  }
}

TEST(KbFsi, AdditiveGameFitsExactly) {
  const auto g = additive(9, 4);
  const auto r = kb_fsi(g, 2, 200, 1);
  for (std::size_t i : r.scores.order_slice(2)) EXPECT_NEAR(r.scores.at(i), 0.0, 1e-8);
}

TEST(KbFsi, ConstraintWeightInsensitive) {
  const auto g = soum_random(10, 12, 7, 10);
  const auto a = kb_fsi(g, 2, 300, 3, 1e7);
  const auto b = kb_fsi(g, 2, 300, 3, 2e7);
  EXPECT_LT(max_abs_difference(a.scores, b.scores), 1e-6);
}

TEST(KbFsi, BudgetFloor) {
  const auto g = soum_random(6, 3, 1, 6);
  EXPECT_THROW(kb_fsi(g, 2, 2 + 21 - 1, 0), InsufficientBudget);
  EXPECT_NO_THROW(kb_fsi(g, 2, 2 + 21 + 30, 0));
}

TEST(WlsSolve, Identity) {
  WlsSystem s;
  s.columns = 3;
  s.add_row({0}, 1.0, 2.0);
  s.add_row({1}, 1.0, -1.0);
  s.add_row({2}, 1.0, 0.5);
  EXPECT_EQ(wls_solve(s), (std::vector<double>{2.0, -1.0, 0.5}));
}

TEST(WlsSolve, DuplicateRowsConsistent) {
  WlsSystem s;
  s.columns = 2;
  for (int k = 0; k < 3; ++k) {
    s.add_row({0}, 0.5, 1.5);
    s.add_row({0, 1}, 2.0, 4.0);
  }
  const auto beta = wls_solve(s);
  EXPECT_NEAR(beta[0], 1.5, 1e-10);
  EXPECT_NEAR(beta[1], 2.5, 1e-10);
}

TEST(WlsSolve, ResidualOrthogonality) {
  Rng rng(12);
  WlsSystem s;
  s.columns = 20;
  std::vector<std::vector<double>> dense;
  for (int r = 0; r < 50; ++r) {
    std::vector<std::uint32_t> cols;
    for (std::uint32_t c = 0; c < 20; ++c) {
      if (rng.uniform() < 0.5) cols.push_back(c);
    }
    s.add_row(cols, 0.1 + rng.uniform(), rng.uniform() * 4 - 2);
  }
  const auto beta = wls_solve(s);
  std::vector<double> grad(20, 0.0);
  for (const auto& row : s.rows) {
    double fit = 0;
    for (auto c : row.cols) fit += beta[c];
    for (auto c : row.cols) grad[c] += row.weight * (row.y - fit);
  }
  for (double x : grad) EXPECT_LT(std::abs(x), 1e-8);
}

TEST(WlsSolve, SingularNamesNullDirection) {
  WlsSystem s;
  s.columns = 2;
  s.labels = {Coalition::from_players({0}), Coalition::from_players({1})};
  s.add_row({0, 1}, 1.0, 1.0);
  s.add_row({0, 1}, 2.0, 1.0);
  try {
    wls_solve(s);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("{0}"), std::string::npos);
  }
}

TEST(WlsSolve, Preconditions) {
  WlsSystem s;
  s.columns = 2;
  s.add_row({0}, 1.0, 1.0);
  EXPECT_THROW(wls_solve(s), PreconditionError);
  s.add_row({1}, 0.0, 1.0);
  EXPECT_THROW(wls_solve(s), PreconditionError);
}
