#ifndef SHAPIQ_EXACT_HPP_
#define SHAPIQ_EXACT_HPP_

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "shapiq/coalition.hpp"
#include "shapiq/errors.hpp"
#include "shapiq/games.hpp"
#include "shapiq/scores.hpp"
#include "shapiq/weights.hpp"

namespace shapiq {

// Largest d accepted by the double-sum definition (cost |S_s0| * 2^d after
// memoization, 4^d in the worst case).
inline constexpr int kMaxDefinitionPlayers = 14;

// δ_S(T) = Σ_{L ⊆ S} (-1)^{s-l} ν(T ∪ L). Evaluates the game 2^s times.
inline double discrete_derivative(const Game& game, Coalition s, Coalition t) {
  if (s.empty()) throw PreconditionError("discrete derivative needs a nonempty S");
  if ((s & t).mask != 0) throw PreconditionError("S and T must be disjoint");
  const int order = s.size();
  double acc = 0.0;
  for_each_submask(s, [&](Coalition l) {
    const double v = game.eval(t | l);
    acc += ((order - l.size()) % 2 == 0) ? v : -v;
  });
  return acc;
}

namespace detail {

inline void require_powerset_capacity(int d, int limit, const char* what) {
  if (d > limit) {
    throw CapacityError(std::string(what) + " supports at most " + std::to_string(limit) +
                        " players, got " + std::to_string(d));
  }
}

inline std::vector<double> tabulate(const Game& game) {
  const int d = game.players();
  const std::size_t n = std::size_t{1} << d;
  std::vector<double> table(n);
  for (std::size_t m = 0; m < n; ++m) table[m] = game.eval(Coalition(static_cast<Mask>(m)));
  return table;
}

}  // namespace detail

// I(S) = Σ_{T ⊆ D\S} m_s(t) δ_S(T), straight from the definition. Game values
// are memoized over the powerset first; this is an oracle, not an estimator.
inline InteractionScores exact_cii_definition(const Game& game, IndexKind kind) {
  const int d = game.players();
  detail::require_powerset_capacity(d, kMaxDefinitionPlayers, "exact_cii_definition");
  const WeightFamily weights(kind, d);
  const std::vector<double> table = detail::tabulate(game);
  const Coalition all = Coalition::full(d);

  InteractionScores out(kind, d);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Coalition s = out.subsets()[i];
    const int order = s.size();
    const Coalition rest(all.mask & ~s.mask);
    double score = 0.0;
    for_each_submask(rest, [&](Coalition t) {
      double delta = 0.0;
      for_each_submask(s, [&](Coalition l) {
        const double v = table[static_cast<std::size_t>((t | l).mask)];
        delta += ((order - l.size()) % 2 == 0) ? v : -v;
      });
      score += weights.m(order, t.size()) * delta;
    });
    out.values()[i] = score;
  }
  return out;
}

// I(S) = Σ_{T ⊆ D} ν0(T) γ_s(t, |T ∩ S|): one pass over the powerset, each
// game value requested once.
inline InteractionScores exact_cii_representation(const Game& game, IndexKind kind) {
  const int d = game.players();
  detail::require_powerset_capacity(d, kMaxPowersetPlayers, "exact_cii_representation");
  const WeightFamily weights(kind, d);
  InteractionScores out(kind, d);
  const auto& subsets = out.subsets();
  std::vector<int> orders(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i) orders[i] = subsets[i].size();

  const double empty_value = game.eval(Coalition{});
  auto& acc = out.values();
  const std::size_t n = std::size_t{1} << d;
  for (std::size_t m = 1; m < n; ++m) {
    const Coalition t(static_cast<Mask>(m));
    const double v0 = game.eval(t) - empty_value;
    if (v0 == 0.0) continue;
    const int size = t.size();
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      acc[i] += v0 * weights.gamma(orders[i], size, intersection_size(t, subsets[i]));
    }
  }
  return out;
}

// Shapley values as ν0(D)/d + Σ_{T ∈ T_1} ν0(T) μ(t) [1(i ∈ T) - t/d].
inline InteractionScores exact_sv_representation(const Game& game) {
  const int d = game.players();
  detail::require_powerset_capacity(d, kMaxPowersetPlayers, "exact_sv_representation");
  InteractionScores out(IndexKind::sv(), d);
  const double empty_value = game.eval(Coalition{});
  const Coalition all = Coalition::full(d);
  const double grand = game.eval(all) - empty_value;
  auto& phi = out.values();
  for (int i = 0; i < d; ++i) phi[static_cast<std::size_t>(i)] = grand / static_cast<double>(d);
  if (d == 1) return out;

  std::vector<double> kernel(static_cast<std::size_t>(d), 0.0);
  for (int t = 1; t < d; ++t) kernel[static_cast<std::size_t>(t)] = shapley_kernel(d, t);
  for (Mask m = 1; m < all.mask; ++m) {
    const Coalition t(m);
    const double v0 = game.eval(t) - empty_value;
    if (v0 == 0.0) continue;
    const int size = t.size();
    const double w = v0 * kernel[static_cast<std::size_t>(size)];
    const double share = static_cast<double>(size) / static_cast<double>(d);
    for (int i = 0; i < d; ++i) {
      phi[static_cast<std::size_t>(i)] += w * ((t.contains(i) ? 1.0 : 0.0) - share);
    }
  }
  return out;
}

// Closed form for a sum of unanimity games:
//   I(S) = Σ_n a_n ω(q_n, |S ∩ Q_n|),
//   ω(q, r) = Σ_{t=q}^{d} Σ_{k=0}^{min(t-q, s-r)} C(d-q-(s-r), t-q-k) C(s-r, k) γ_s(t, k+r).
// ω is cached per (s, q, r); no bound on d beyond the mask width.
inline InteractionScores soum_ground_truth(const SoumGame& soum, IndexKind kind) {
  const int d = soum.players();
  const WeightFamily weights(kind, d);
  const auto pascal = pascal_triangle(d);
  auto choose = [&](int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0.0;
    return pascal[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  };

  std::map<std::tuple<int, int, int>, double> omega_cache;
  auto omega = [&](int s, int q, int r) {
    const auto key = std::make_tuple(s, q, r);
    if (auto it = omega_cache.find(key); it != omega_cache.end()) return it->second;
    const int outside = s - r;
    double acc = 0.0;
    for (int t = q; t <= d; ++t) {
      const int k_max = std::min(t - q, outside);
      for (int k = 0; k <= k_max; ++k) {
        const double ways = choose(d - q - outside, t - q - k) * choose(outside, k);
        if (ways == 0.0) continue;
        acc += ways * weights.gamma(s, t, k + r);
      }
    }
    omega_cache.emplace(key, acc);
    return acc;
  };

  InteractionScores out(kind, d);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Coalition s = out.subsets()[i];
    const int order = s.size();
    double score = 0.0;
    for (const auto& term : soum.terms()) {
      score += term.coefficient * omega(order, term.players.size(), intersection_size(s, term.players));
    }
    out.values()[i] = score;
  }
  return out;
}

// Σ_{|S| = s0} I^SII(S) as Σ_T ρ(|T|) ν0(T). ρ vanishes for s0 <= t <= d-s0,
// so only coalitions of size < s0 or > d-s0 are evaluated. When d >= 2 s0 - 1
// this reduces to ρ(t) = (-1)^{s0-t} r(t), ρ(d-t) = (-1)^t r(t) with
// r(t) = C(d-t, s0-t-1) / s0.
inline double sii_top_order_sum(const Game& game, int s0) {
  const int d = game.players();
  if (s0 < 1 || s0 > d) throw PreconditionError("order s0 must lie in [1, d]");
  const double empty_value = game.eval(Coalition{});
  auto v0 = [&](Coalition t) { return t.empty() ? 0.0 : game.eval(t) - empty_value; };

  // Coefficient of v0(T) for |T| = t; zero for s0 <= t <= d - s0.
  const IndexKind kind(Index::SII, s0);
  auto rho = [&](int t) {
    double acc = 0.0;
    for (int k = std::max(0, s0 - (d - t)); k <= std::min(t, s0); ++k) {
      if (t - k > d - s0) continue;
      const double sign = ((s0 - k) % 2 == 0) ? 1.0 : -1.0;
      acc += sign * binom(t, k) * binom(d - t, s0 - k) * weight_m(kind, d, s0, t - k);
    }
    return acc;
  };
  double total = 0.0;
  for (int t = 1; t <= d; ++t) {
    if (t >= s0 && t <= d - s0) continue;
    const double c = rho(t);
    for_each_subset_of_size(d, t, [&](Coalition T) { total += c * v0(T); });
  }
  return total;
}

}  // namespace shapiq

#endif  // SHAPIQ_EXACT_HPP_
