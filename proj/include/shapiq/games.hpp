#ifndef SHAPIQ_GAMES_HPP_
#define SHAPIQ_GAMES_HPP_

#include <atomic>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shapiq/coalition.hpp"
#include "shapiq/errors.hpp"
#include "shapiq/rng.hpp"

namespace shapiq {

// A cooperative game: a real value for every coalition of `players()` players.
// Implementations are immutable after construction, so concurrent calls to
// value() are safe. BudgetedGame is the one exception that carries state; it
// counts atomically.
class Game {
 public:
  virtual ~Game() = default;

  virtual int players() const = 0;

  // Throws InvalidCoalition for bits at or above players().
  double eval(Coalition t) const {
    if (!t.valid_for(players())) {
      throw InvalidCoalition("coalition mask " + std::to_string(t.mask) + " has bits beyond d=" +
                             std::to_string(players()));
    }
    return value(t);
  }

 protected:
  // Called with already validated coalitions.
  virtual double value(Coalition t) const = 0;

  friend class BudgetedGame;
  friend class CenteredGame;
};

inline void check_player_count(int d) {
  if (d < 1 || d > kMaxPlayers) {
    throw CapacityError("player count " + std::to_string(d) + " outside [1, " +
                        std::to_string(kMaxPlayers) + "]");
  }
}

// ν(T) = Σ_n a_n · 1(Q_n ⊆ T).
class SoumGame final : public Game {
 public:
  struct Term {
    Coalition players;
    double coefficient = 0.0;
  };

  SoumGame(int d, std::vector<Term> terms) : d_(d), terms_(std::move(terms)) {
    check_player_count(d);
    if (terms_.empty()) throw PreconditionError("a sum of unanimity games needs at least one term");
    for (const Term& term : terms_) {
      if (term.players.empty()) throw PreconditionError("unanimity term with empty player set");
      if (!term.players.valid_for(d)) throw InvalidCoalition("unanimity term references player >= d");
      if (!std::isfinite(term.coefficient)) throw PreconditionError("non-finite unanimity coefficient");
    }
  }

  int players() const override { return d_; }
  const std::vector<Term>& terms() const { return terms_; }

 protected:
  double value(Coalition t) const override {
    double v = 0.0;
    for (const Term& term : terms_) {
      if (term.players.is_subset_of(t)) v += term.coefficient;
    }
    return v;
  }

 private:
  int d_;
  std::vector<Term> terms_;
};

// Game backed by a full table of 2^d values in mask order (player 0 at bit 0).
class TabularGame final : public Game {
 public:
  TabularGame(int d, std::vector<double> values) : d_(d), values_(std::move(values)) {
    if (d < 0 || d > kMaxPowersetPlayers) {
      throw CapacityError("tabular games support at most " + std::to_string(kMaxPowersetPlayers) +
                          " players, got " + std::to_string(d));
    }
    if (values_.size() != (std::size_t{1} << d)) {
      throw SchemaError("tabular game with d=" + std::to_string(d) + " needs " +
                        std::to_string(std::size_t{1} << d) + " values, got " +
                        std::to_string(values_.size()));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw SchemaError("tabular game contains a non-finite value");
    }
  }

  int players() const override { return d_; }
  const std::vector<double>& values() const { return values_; }

 protected:
  double value(Coalition t) const override { return values_[static_cast<std::size_t>(t.mask)]; }

 private:
  int d_;
  std::vector<double> values_;
};

// Wraps any callable double(Coalition) as a game. Handy for tests and for
// games defined by a formula.
template <typename Fn>
class FunctionGame final : public Game {
 public:
  FunctionGame(int d, Fn fn) : d_(d), fn_(std::move(fn)) { check_player_count(d); }
  int players() const override { return d_; }

 protected:
  double value(Coalition t) const override { return fn_(t); }

 private:
  int d_;
  Fn fn_;
};

template <typename Fn>
FunctionGame<Fn> make_game(int d, Fn fn) {
  return FunctionGame<Fn>(d, std::move(fn));
}

// Counts every evaluation request, repeats included. With a limit set, a
// request beyond it throws BudgetExhausted instead of evaluating.
class BudgetedGame final : public Game {
 public:
  explicit BudgetedGame(const Game& inner, std::optional<std::uint64_t> limit = std::nullopt)
      : inner_(inner), limit_(limit) {}

  int players() const override { return inner_.players(); }

  std::uint64_t calls_used() const { return calls_.load(std::memory_order_relaxed); }
  std::optional<std::uint64_t> calls_limit() const { return limit_; }
  std::uint64_t calls_remaining() const {
    return limit_ ? *limit_ - calls_used() : UINT64_MAX;
  }

 protected:
  double value(Coalition t) const override {
    const std::uint64_t used = calls_.fetch_add(1, std::memory_order_relaxed);
    if (limit_ && used >= *limit_) {
      calls_.fetch_sub(1, std::memory_order_relaxed);
      throw BudgetExhausted("evaluation budget of " + std::to_string(*limit_) + " exhausted");
    }
    return inner_.value(t);
  }

 private:
  const Game& inner_;
  std::optional<std::uint64_t> limit_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

// ν0(T) = ν(T) - ν(∅). ν(∅) is requested from the inner game exactly once,
// at construction; shifted(∅) returns 0 without touching the inner game.
class CenteredGame {
 public:
  explicit CenteredGame(const Game& inner) : inner_(inner), empty_value_(inner.eval(Coalition{})) {}

  int players() const { return inner_.players(); }
  double empty_value() const { return empty_value_; }

  double shifted(Coalition t) const {
    if (t.empty()) return 0.0;
    return inner_.eval(t) - empty_value_;
  }

 private:
  const Game& inner_;
  double empty_value_;
};

// Convenience form of CenteredGame for one-off lookups. Evaluates ν(∅) on
// every call, so estimators use CenteredGame instead.
inline double eval_shifted(const Game& game, Coalition t) {
  if (!t.valid_for(game.players())) {
    throw InvalidCoalition("coalition has bits beyond d=" + std::to_string(game.players()));
  }
  if (t.empty()) return 0.0;
  return game.eval(t) - game.eval(Coalition{});
}

// Random SOUM: each term's size is uniform on {1..max_order}, its players a
// uniform subset of that size, and its coefficient uniform on [0, 1).
inline SoumGame soum_random(int d, int n_terms, std::uint64_t seed, int max_order) {
  check_player_count(d);
  if (n_terms < 1) throw PreconditionError("need at least one unanimity term");
  if (max_order < 1 || max_order > d) {
    throw PreconditionError("max_order must lie in [1, d]");
  }
  Rng rng(seed);
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::vector<SoumGame::Term> terms;
  terms.reserve(static_cast<std::size_t>(n_terms));
  for (int n = 0; n < n_terms; ++n) {
    const int size = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_order)));
    for (int i = 0; i < d; ++i) perm[static_cast<std::size_t>(i)] = i;
    // Partial Fisher-Yates: the first `size` slots become a uniform subset.
    Mask m = 0;
    for (int i = 0; i < size; ++i) {
      const auto j = static_cast<std::size_t>(i) +
                     static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(d - i)));
      std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
      m |= Mask{1} << perm[static_cast<std::size_t>(i)];
    }
    terms.push_back({Coalition(m), rng.uniform()});
  }
  return SoumGame(d, std::move(terms));
}

// Exhaustively evaluates all 2^d coalitions, once each.
inline TabularGame tabular_from_game(const Game& game) {
  const int d = game.players();
  if (d > kMaxPowersetPlayers) {
    throw CapacityError("cannot tabulate a game with " + std::to_string(d) + " players (limit " +
                        std::to_string(kMaxPowersetPlayers) + ")");
  }
  const std::size_t n = std::size_t{1} << d;
  std::vector<double> values(n);
  for (std::size_t m = 0; m < n; ++m) values[m] = game.eval(Coalition(static_cast<Mask>(m)));
  return TabularGame(d, std::move(values));
}

}  // namespace shapiq

#endif  // SHAPIQ_GAMES_HPP_
