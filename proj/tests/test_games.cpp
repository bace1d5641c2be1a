#include <gtest/gtest.h>

#include <thread>

#include "shapiq/games.hpp"

using namespace shapiq;

namespace {

SoumGame pair_unanimity() { return SoumGame(3, {{Coalition::from_players({0, 1}), 1.0}}); }

}  // namespace

TEST(Games, SoumIndicator) {
  const auto g = pair_unanimity();
  EXPECT_EQ(g.eval(Coalition::from_players({0, 1, 2})), 1.0);
  EXPECT_EQ(g.eval(Coalition::from_players({0})), 0.0);
}

TEST(Games, TabularLookup) {
  std::vector<double> v(8, 0.0);
  v[5] = 0.7;
  const TabularGame g(3, v);
  EXPECT_EQ(g.eval(Coalition(5)), 0.7);
}

TEST(Games, InvalidCoalitionRejected) {
  const auto g = pair_unanimity();
  EXPECT_THROW(g.eval(Coalition(0b1000)), InvalidCoalition);
  EXPECT_THROW(eval_shifted(g, Coalition(0b1000)), InvalidCoalition);
}

TEST(Games, EvalShifted) {
  std::vector<double> v(4, 0.0);
  v[0] = 2.0;
  v[3] = 5.0;
  const TabularGame g(2, v);
  EXPECT_EQ(eval_shifted(g, Coalition{}), 0.0);
  EXPECT_EQ(eval_shifted(g, Coalition(3)), 3.0);
  const SoumGame s(1, {{Coalition::from_players({0}), 0.5}});
  EXPECT_EQ(eval_shifted(s, Coalition(1)), 0.5);
}

TEST(Games, CenteredGameFetchesEmptyOnce) {
  std::vector<double> v(4, 1.0);
  v[3] = 4.0;
  const TabularGame g(2, v);
  BudgetedGame counted(g);
  const CenteredGame c(counted);
  EXPECT_EQ(counted.calls_used(), 1u);
  EXPECT_EQ(c.shifted(Coalition{}), 0.0);
  EXPECT_EQ(c.shifted(Coalition(3)), 3.0);
  EXPECT_EQ(c.shifted(Coalition(3)), 3.0);
  EXPECT_EQ(counted.calls_used(), 3u);
}

TEST(Games, SoumValidation) {
  EXPECT_THROW(SoumGame(3, {}), PreconditionError);
  EXPECT_THROW(SoumGame(3, {{Coalition{}, 1.0}}), PreconditionError);
  EXPECT_THROW(SoumGame(3, {{Coalition(0b1000), 1.0}}), InvalidCoalition);
  EXPECT_THROW(SoumGame(64, {{Coalition(1), 1.0}}), CapacityError);
}

TEST(Games, TabularValidation) {
  EXPECT_THROW(TabularGame(2, std::vector<double>(3)), SchemaError);
  EXPECT_THROW(TabularGame(25, {}), CapacityError);
  EXPECT_THROW(TabularGame(1, {0.0, std::nan("")}), SchemaError);
}

TEST(Games, SoumRandomProtocol) {
  const auto g = soum_random(30, 50, 11, 30);
  EXPECT_EQ(g.players(), 30);
  ASSERT_EQ(g.terms().size(), 50u);
  for (const auto& t : g.terms()) {
    EXPECT_GE(t.players.size(), 1);
    EXPECT_LE(t.players.size(), 30);
    EXPECT_GE(t.coefficient, 0.0);
    EXPECT_LT(t.coefficient, 1.0);
  }
  const auto single = soum_random(3, 1, 4, 1);
  ASSERT_EQ(single.terms().size(), 1u);
  EXPECT_EQ(single.terms()[0].players.size(), 1);
}

TEST(Games, SoumRandomDeterministic) {
  const auto a = soum_random(12, 20, 99, 5);
  const auto b = soum_random(12, 20, 99, 5);
  ASSERT_EQ(a.terms().size(), b.terms().size());
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    EXPECT_EQ(a.terms()[i].players, b.terms()[i].players);
    EXPECT_EQ(a.terms()[i].coefficient, b.terms()[i].coefficient);
  }
  EXPECT_THROW(soum_random(5, 3, 1, 6), PreconditionError);
}

TEST(Games, SoumMonotoneForNonnegativeCoefficients) {
  const auto g = soum_random(8, 15, 3, 8);
  for (Mask t = 0; t < 256; ++t) {
    for (int i = 0; i < 8; ++i) {
      const Mask sup = t | (Mask{1} << i);
      EXPECT_LE(g.eval(Coalition(t)), g.eval(Coalition(sup)));
    }
  }
}

TEST(Games, TabularFromGame) {
  const SoumGame g(2, {{Coalition::from_players({0, 1}), 1.0}});
  const auto t = tabular_from_game(g);
  EXPECT_EQ(t.values(), (std::vector<double>{0, 0, 0, 1}));
  const auto again = tabular_from_game(t);
  EXPECT_EQ(again.values(), t.values());
  const SoumGame big(25, {{Coalition(1), 1.0}});
  EXPECT_THROW(tabular_from_game(big), CapacityError);
}

TEST(Games, BudgetedCountsRepeatsAndEnforcesLimit) {
  const auto g = pair_unanimity();
  BudgetedGame b(g, 3);
  b.eval(Coalition(1));
  b.eval(Coalition(1));
  b.eval(Coalition(3));
  EXPECT_EQ(b.calls_used(), 3u);
  EXPECT_EQ(b.calls_remaining(), 0u);
  EXPECT_THROW(b.eval(Coalition(1)), BudgetExhausted);
  EXPECT_EQ(b.calls_used(), 3u);
}

TEST(Games, BudgetedCounterIsThreadSafe) {
  const auto g = pair_unanimity();
  BudgetedGame b(g);
  std::vector<std::thread> pool;
  for (int k = 0; k < 4; ++k) {
    pool.emplace_back([&] {
      for (int i = 0; i < 10000; ++i) b.eval(Coalition(static_cast<Mask>(i % 8)));
    });
  }
  for (auto& t : pool) t.join();
  EXPECT_EQ(b.calls_used(), 40000u);
}

TEST(Games, FunctionGame) {
  auto g = make_game(4, [](Coalition t) { return static_cast<double>(t.size()); });
  EXPECT_EQ(g.eval(Coalition(0b1011)), 3.0);
  EXPECT_EQ(g.players(), 4);
}
