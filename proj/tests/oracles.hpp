// Independent reference computations for the test suites. Nothing here
// calls into the weight tables or estimators under test.
#ifndef SHAPIQ_TESTS_ORACLES_HPP_
#define SHAPIQ_TESTS_ORACLES_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

inline long double fact(int n) { return std::tgamma(static_cast<long double>(n) + 1.0L); }

inline int pc(u64 m) { return std::popcount(m); }

// Classical factorial weights, straight from the index definitions.
inline long double sii_weight(int d, int s, int t) { return fact(d - t - s) * fact(t) / fact(d - s + 1); }

inline long double sti_top_weight(int d, int s0, int t) { return s0 * fact(d - t - 1) * fact(t) / fact(d); }

inline long double fsi_top_weight(int d, int s0, int t) {
  return fact(2 * s0 - 1) / (fact(s0 - 1) * fact(s0 - 1)) * fact(d - t - 1) * fact(t + s0 - 1) /
         fact(d + s0 - 1);
}

inline long double derivative(const std::vector<double>& v, u64 s, u64 t) {
  long double acc = 0;
  for (u64 l = s;; l = (l - 1) & s) {
    const long double x = v[t | l];
    acc += ((pc(s) - pc(l)) % 2 == 0) ? x : -x;
    if (l == 0) break;
  }
  return acc;
}

enum class Kind { SII, STI, FSI };

// I(S) for one subset by the definition with classical weights.
inline double cii(const std::vector<double>& v, int d, Kind kind, int s0, u64 s) {
  const int order = pc(s);
  const u64 rest = ((u64{1} << d) - 1) & ~s;
  long double acc = 0;
  for (u64 t = rest;; t = (t - 1) & rest) {
    const int size = pc(t);
    long double w = 0;
    if (kind == Kind::SII) w = sii_weight(d, order, size);
    else if (kind == Kind::STI) w = (order == s0) ? sti_top_weight(d, s0, size) : (size == 0 ? 1.0L : 0.0L);
    else w = fsi_top_weight(d, s0, size);
    if (w != 0) acc += w * derivative(v, s, t);
    if (t == 0) break;
  }
  return static_cast<double>(acc);
}

// Shapley value from marginal contributions, |T|!(d-|T|-1)!/d!.
inline std::vector<double> shapley(const std::vector<double>& v, int d) {
  std::vector<double> phi(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    long double acc = 0;
    const u64 bit = u64{1} << i;
    for (u64 t = 0; t < (u64{1} << d); ++t) {
      if (t & bit) continue;
      acc += fact(pc(t)) * fact(d - pc(t) - 1) / fact(d) * (v[t | bit] - v[t]);
    }
    phi[static_cast<std::size_t>(i)] = static_cast<double>(acc);
  }
  return phi;
}

inline std::vector<double> random_table(int d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(std::size_t{1} << d);
  for (auto& x : v) x = n(gen);
  return v;
}

}  // namespace oracle

#endif  // SHAPIQ_TESTS_ORACLES_HPP_
