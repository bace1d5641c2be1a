#ifndef SHAPIQ_SAMPLING_HPP_
#define SHAPIQ_SAMPLING_HPP_

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "shapiq/coalition.hpp"
#include "shapiq/errors.hpp"
#include "shapiq/rng.hpp"
#include "shapiq/weights.hpp"

namespace shapiq {

// Split of the powerset into an enumerated border (sizes t < k0 and
// t > d - k0) and a sampled middle [k0, d - k0].
struct SamplingPlan {
  int d = 0;
  int k0 = 0;
  // P(|T| = t) under the sampling distribution; zero outside the sampled range.
  std::vector<double> p_size;
  // Coalitions still available for sampling after the border is enumerated.
  std::uint64_t budget_remaining = 0;
  // Number of coalitions in the border.
  std::uint64_t deterministic_count = 0;

  bool is_deterministic_size(int t) const { return t < k0 || t > d - k0; }
  bool sampling_range_empty() const { return k0 > d - k0; }

  // Probability of drawing one specific coalition of size t.
  double coalition_probability(int t) const {
    return p_size[static_cast<std::size_t>(t)] / binom(d, t);
  }

  std::vector<int> deterministic_sizes() const {
    std::vector<int> out;
    for (int t = 0; t <= d; ++t) {
      if (is_deterministic_size(t)) out.push_back(t);
    }
    return out;
  }
};

namespace detail {

// P(|T| = t) ∝ q(t) C(d, t) over [k0, d - k0]. A tail size (q0) that is still
// inside the range could not be enumerated; it is sampled with the weight of
// the nearest finite size toward the centre so that every coalition keeps
// positive probability. If no finite weight exists, coalitions are uniform.
inline std::vector<double> size_distribution(const SamplingWeights& q, int k0) {
  const int d = q.d;
  std::vector<double> p(static_cast<std::size_t>(d) + 1, 0.0);
  if (k0 > d - k0) return p;
  auto effective_q = [&](int t) {
    if (!q.is_tail(t)) return q.q[static_cast<std::size_t>(t)];
    const int step = (t <= d - t) ? 1 : -1;
    for (int u = t; u >= k0 && u <= d - k0; u += step) {
      if (!q.is_tail(u)) return q.q[static_cast<std::size_t>(u)];
    }
    return 1.0;
  };
  bool any_finite = false;
  for (int t = k0; t <= d - k0; ++t) any_finite = any_finite || !q.is_tail(t);
  double total = 0.0;
  for (int t = k0; t <= d - k0; ++t) {
    const double w = (any_finite ? effective_q(t) : 1.0) * binom(d, t);
    p[static_cast<std::size_t>(t)] = w;
    total += w;
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace detail

// Walks t = 0, 1, ..., floor(d/2). Size pair (t, d - t) moves into the
// enumerated border when the budget is expected to draw every coalition of
// those sizes, i.e. budget * q(t) >= R and budget * q(d - t) >= R with R the
// normalizer Σ_{k=k0}^{d-k0} q(k) C(d, k) over the current sampling range.
// Tail-weighted sizes move as soon as the budget covers them. The walk stops
// at the first size pair that stays sampled.
inline SamplingPlan determine_sampling_order(const SamplingWeights& q, std::uint64_t budget) {
  const int d = q.d;
  std::uint64_t remaining = budget;
  int k0 = 0;
  for (int t = 0; t <= d / 2; ++t) {
    const bool middle = (t == d - t);
    const double count = binom(d, t);
    const double cost = middle ? count : 2.0 * count;
    if (static_cast<double>(remaining) < cost) break;

    bool promote = false;
    if (q.is_tail(t) || q.is_tail(d - t)) {
      promote = true;
    } else {
      double normalizer = 0.0;
      for (int k = k0; k <= d - k0; ++k) normalizer += q.q[static_cast<std::size_t>(k)] * binom(d, k);
      // M p(T) >= 1, with slack for rounding in the normalizer.
      const double r = static_cast<double>(remaining);
      const double bar = normalizer * (1.0 - 1e-12);
      promote = r * q.q[static_cast<std::size_t>(t)] >= bar && r * q.q[static_cast<std::size_t>(d - t)] >= bar;
    }
    if (!promote) break;
    ++k0;
    remaining -= static_cast<std::uint64_t>(cost);
  }
  SamplingPlan plan;
  plan.d = d;
  plan.k0 = k0;
  plan.p_size = detail::size_distribution(q, k0);
  plan.budget_remaining = remaining;
  plan.deterministic_count = budget - remaining;
  return plan;
}

// Plan with a caller-chosen sampling order. Used where an estimator is
// defined for one specific k0 (the Shapley-value specialisation uses k0 = 1).
inline SamplingPlan fixed_order_plan(const SamplingWeights& q, int k0, std::uint64_t budget) {
  const int d = q.d;
  if (k0 < 0) throw PreconditionError("sampling order must be >= 0");
  double border = 0.0;
  for (int t = 0; t <= d; ++t) {
    if (t < k0 || t > d - k0) border += binom(d, t);
  }
  if (static_cast<double>(budget) < border) {
    throw InsufficientBudget("budget " + std::to_string(budget) + " cannot cover the " +
                             std::to_string(static_cast<std::uint64_t>(border)) +
                             " coalitions outside the sampling range for k0=" + std::to_string(k0));
  }
  SamplingPlan plan;
  plan.d = d;
  plan.k0 = k0;
  plan.p_size = detail::size_distribution(q, k0);
  plan.deterministic_count = static_cast<std::uint64_t>(border);
  plan.budget_remaining = budget - plan.deterministic_count;
  return plan;
}

// Calls fn(Coalition) once for every coalition outside the sampling range,
// by increasing size and then mask.
template <typename Fn>
void for_each_border_coalition(const SamplingPlan& plan, Fn&& fn) {
  for (int t = 0; t <= plan.d; ++t) {
    if (plan.is_deterministic_size(t)) for_each_subset_of_size(plan.d, t, fn);
  }
}

namespace detail {

inline std::vector<double> size_cdf(const SamplingPlan& plan) {
  std::vector<double> cdf(plan.p_size.size());
  std::partial_sum(plan.p_size.begin(), plan.p_size.end(), cdf.begin());
  if (plan.sampling_range_empty() || cdf.empty() || !(cdf.back() > 0.0)) {
    throw PreconditionError("nothing to sample: the sampling range is empty");
  }
  return cdf;
}

// Size from the cdf, then a uniform subset of that size by partial
// Fisher-Yates over `scratch` (resized to d).
inline Coalition draw(std::span<const double> cdf, int d, Rng& rng, std::vector<int>& scratch) {
  const int t = static_cast<int>(rng.from_cdf(cdf));
  scratch.resize(static_cast<std::size_t>(d));
  std::iota(scratch.begin(), scratch.end(), 0);
  Mask m = 0;
  for (int i = 0; i < t; ++i) {
    const auto j = static_cast<std::size_t>(i) +
                   static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(d - i)));
    std::swap(scratch[static_cast<std::size_t>(i)], scratch[j]);
    m |= Mask{1} << scratch[static_cast<std::size_t>(i)];
  }
  return Coalition(m);
}

}  // namespace detail

// One draw T ~ p_k0. Rebuilds the size cdf on each call; loops should use
// CoalitionSampler.
inline Coalition sample_coalition(const SamplingPlan& plan, Rng& rng) {
  std::vector<int> scratch;
  return detail::draw(detail::size_cdf(plan), plan.d, rng, scratch);
}

// i.i.d. draws from the plan's sampling distribution. The stream is a pure
// function of (plan, seed), so two estimators seeded alike see the same
// coalitions.
class CoalitionSampler {
 public:
  CoalitionSampler(const SamplingPlan& plan, std::uint64_t seed)
      : d_(plan.d), rng_(seed), cdf_(detail::size_cdf(plan)) {}

  Coalition next() { return detail::draw(cdf_, d_, rng_, scratch_); }

 private:
  int d_;
  Rng rng_;
  std::vector<double> cdf_;
  std::vector<int> scratch_;
};

}  // namespace shapiq

#endif  // SHAPIQ_SAMPLING_HPP_
