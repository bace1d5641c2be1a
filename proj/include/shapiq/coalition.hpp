#ifndef SHAPIQ_COALITION_HPP_
#define SHAPIQ_COALITION_HPP_

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "shapiq/errors.hpp"

namespace shapiq {

using Mask = std::uint64_t;

// Hard cap on the player count. Coalitions are 64-bit masks and the full
// set D must itself be representable, so bit 63 stays unused.
inline constexpr int kMaxPlayers = 63;
// Cap for anything that materializes the whole powerset.
inline constexpr int kMaxPowersetPlayers = 24;

// A subset of players {0, ..., d-1}; bit i set means player i is a member.
// The player count is carried by the surrounding game, not by the value.
struct Coalition {
  Mask mask = 0;

  constexpr Coalition() = default;
  constexpr explicit Coalition(Mask m) : mask(m) {}

  static Coalition from_players(const std::vector<int>& players) {
    Mask m = 0;
    for (int p : players) {
      if (p < 0 || p >= kMaxPlayers) {
        throw InvalidCoalition("player index " + std::to_string(p) + " out of range");
      }
      m |= Mask{1} << p;
    }
    return Coalition(m);
  }

  static constexpr Coalition full(int d) {
    return Coalition(d >= 64 ? ~Mask{0} : (Mask{1} << d) - 1);
  }

  constexpr int size() const { return std::popcount(mask); }
  constexpr bool empty() const { return mask == 0; }
  constexpr bool contains(int player) const { return (mask >> player) & 1U; }
  constexpr bool is_subset_of(Coalition other) const { return (mask & ~other.mask) == 0; }
  constexpr bool valid_for(int d) const { return (mask & ~full(d).mask) == 0; }

  std::vector<int> players() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Mask m = mask; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  friend constexpr Coalition operator|(Coalition a, Coalition b) { return Coalition(a.mask | b.mask); }
  friend constexpr Coalition operator&(Coalition a, Coalition b) { return Coalition(a.mask & b.mask); }
  friend constexpr bool operator==(Coalition a, Coalition b) = default;
  friend constexpr auto operator<=>(Coalition a, Coalition b) = default;
};

// |A ∩ B| without building the intersection.
constexpr int intersection_size(Coalition a, Coalition b) { return std::popcount(a.mask & b.mask); }

// Canonical order used for every interaction listing: by size, then by mask.
struct CanonicalLess {
  constexpr bool operator()(Coalition a, Coalition b) const {
    const int sa = a.size();
    const int sb = b.size();
    return sa != sb ? sa < sb : a.mask < b.mask;
  }
};

// Binomial coefficient in double precision via the multiplicative formula.
// Returns 0 outside 0 <= k <= n. Exact for every value below 2^53.
inline double binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

// Pascal rows 0..n as doubles; row[i][j] = C(i, j).
inline std::vector<std::vector<double>> pascal_triangle(int n) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    row.assign(static_cast<std::size_t>(i) + 1, 1.0);
    for (int j = 1; j < i; ++j) {
      row[static_cast<std::size_t>(j)] =
          rows[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j) - 1] +
          rows[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j)];
    }
  }
  return rows;
}

// Next mask with the same popcount (Gosper's hack). Caller stops once the
// result leaves the universe.
constexpr Mask next_same_size(Mask x) {
  const Mask c = x & (~x + 1);
  const Mask r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

// Calls fn(Coalition) for every subset of {0..d-1} with exactly k members,
// in increasing mask order.
template <typename Fn>
void for_each_subset_of_size(int d, int k, Fn&& fn) {
  if (k < 0 || k > d) return;
  if (k == 0) {
    fn(Coalition{});
    return;
  }
  const Mask limit = Coalition::full(d).mask;
  Mask m = (Mask{1} << k) - 1;
  while (true) {
    fn(Coalition(m));
    if (k == d) return;
    const Mask next = next_same_size(m);
    if (next > limit || next <= m) return;
    m = next;
  }
}

// Calls fn(Coalition) for every submask of `set`, including the empty set and
// `set` itself, in decreasing mask order.
template <typename Fn>
void for_each_submask(Coalition set, Fn&& fn) {
  Mask sub = set.mask;
  while (true) {
    fn(Coalition(sub));
    if (sub == 0) return;
    sub = (sub - 1) & set.mask;
  }
}

// Every nonempty subset of {0..d-1} with size <= max_order, in canonical
// order. With `top_only`, just the subsets of size exactly max_order.
inline std::vector<Coalition> interaction_subsets(int d, int max_order, bool top_only = false) {
  std::vector<Coalition> out;
  const int lo = top_only ? max_order : 1;
  for (int s = lo; s <= max_order; ++s) {
    for_each_subset_of_size(d, s, [&](Coalition c) { out.push_back(c); });
  }
  return out;
}

// Calls fn(Coalition) for every nonempty S ⊆ t with |S| <= max_size, without
// walking the full powerset of t.
template <typename Fn>
void for_each_subset_upto(Coalition t, int max_size, Fn&& fn) {
  const std::vector<int> members = t.players();
  const int n = static_cast<int>(members.size());
  auto rec = [&](auto&& self, int start, int depth, Mask acc) -> void {
    for (int i = start; i < n; ++i) {
      const Mask next = acc | (Mask{1} << members[static_cast<std::size_t>(i)]);
      fn(Coalition(next));
      if (depth + 1 < max_size) self(self, i + 1, depth + 1, next);
    }
  };
  if (max_size > 0) rec(rec, 0, 0, 0);
}

}  // namespace shapiq

#endif  // SHAPIQ_COALITION_HPP_
