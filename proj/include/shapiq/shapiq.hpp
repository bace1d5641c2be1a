#ifndef SHAPIQ_SHAPIQ_HPP_
#define SHAPIQ_SHAPIQ_HPP_

#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "shapiq/coalition.hpp"
#include "shapiq/errors.hpp"
#include "shapiq/games.hpp"
#include "shapiq/sampling.hpp"
#include "shapiq/scores.hpp"
#include "shapiq/weights.hpp"
#include "shapiq/welford.hpp"

namespace shapiq {

struct EstimateReport {
  InteractionScores scores;
  std::vector<double> variances;  // aligned with scores.subsets()
  std::vector<double> c_part;     // deterministic contribution, same alignment
  int k0 = 0;
  std::uint64_t samples_drawn = 0;
  std::uint64_t budget_used = 0;
  std::uint64_t seed = 0;
  // k0 >= s0: the regime in which the efficiency guarantees apply.
  bool order_covered = false;
  // Fewer than two samples: variances are reported as 0.
  bool variance_undefined = false;
  // Per-subset update counts, for estimators that do not touch every subset
  // on every draw. Empty otherwise.
  std::vector<std::uint64_t> counts;
  // Estimator-specific scalars (U-KSH constants and the like).
  std::map<std::string, double> extras;
};

namespace detail {

inline void require_min_budget(std::uint64_t budget) {
  if (budget < 2) {
    throw InsufficientBudget("budget " + std::to_string(budget) + " < 2: the empty and grand coalitions must be affordable");
  }
}

inline SamplingWeights weights_for(int d, SamplingScheme scheme, IndexKind kind) {
  return sampling_weights(d, scheme, scheme == SamplingScheme::SiiTail ? kind.s0 : 1);
}

}  // namespace detail

// SHAP-IQ on an explicit plan. The empty coalition is charged once up front;
// the border outside [k0, d-k0] is enumerated once and the remaining budget
// is drawn i.i.d. from the plan.
inline EstimateReport shapiq_estimate(const Game& game, IndexKind kind, const SamplingPlan& plan,
                                      std::uint64_t budget, std::uint64_t seed) {
  detail::require_min_budget(budget);
  const int d = game.players();
  if (plan.d != d) throw PreconditionError("sampling plan built for a different player count");
  const WeightFamily weights(kind, d);

  BudgetedGame counted(game);
  const CenteredGame centered(counted);

  EstimateReport report;
  report.scores = InteractionScores(kind, d);
  report.k0 = plan.k0;
  report.seed = seed;
  report.order_covered = plan.k0 >= kind.s0;

  const auto& subsets = report.scores.subsets();
  const std::size_t width = subsets.size();
  // Per coalition, γ only depends on (|S|, |T ∩ S|); coef holds scale·γ for
  // the current |T| at row |S|, column |T ∩ S|.
  const std::size_t stride = static_cast<std::size_t>(kind.s0) + 1;
  std::vector<Mask> masks(width);
  std::vector<std::size_t> row(width);
  for (std::size_t i = 0; i < width; ++i) {
    masks[i] = subsets[i].mask;
    row[i] = static_cast<std::size_t>(subsets[i].size()) * stride;
  }
  std::vector<double> coef(stride * stride, 0.0);
  auto fill_coef = [&](int size, double scale) {
    for (int s = kind.min_order(); s <= kind.s0; ++s) {
      for (int k = 0; k <= s; ++k) {
        coef[static_cast<std::size_t>(s) * stride + static_cast<std::size_t>(k)] =
            k <= size ? scale * weights.gamma(s, size, k) : 0.0;
      }
    }
  };
  auto term = [&](Mask t, std::size_t i) {
    return coef[row[i] + static_cast<std::size_t>(std::popcount(t & masks[i]))];
  };

  report.c_part.assign(width, 0.0);
  for_each_border_coalition(plan, [&](Coalition t) {
    const double v0 = centered.shifted(t);
    if (v0 == 0.0) return;
    fill_coef(t.size(), v0);
    for (std::size_t i = 0; i < width; ++i) report.c_part[i] += term(t.mask, i);
  });

  // The empty coalition was paid for by CenteredGame. If it sits in the
  // sampling range it was not part of the border charge, so one sample slot
  // pays for it instead.
  std::uint64_t n_samples = plan.budget_remaining;
  if (!plan.is_deterministic_size(0) && n_samples > 0) --n_samples;

  WelfordState stream(width);
  if (n_samples > 0 && !plan.sampling_range_empty()) {
    CoalitionSampler sampler(plan, seed);
    std::vector<double> inv_p(static_cast<std::size_t>(d) + 1, 0.0);
    for (int t = 0; t <= d; ++t) {
      const double p = plan.p_size[static_cast<std::size_t>(t)];
      if (p > 0.0) inv_p[static_cast<std::size_t>(t)] = binom(d, t) / p;
    }
    for (std::uint64_t k = 0; k < n_samples; ++k) {
      const Coalition t = sampler.next();
      const double v0 = centered.shifted(t);
      const int size = t.size();
      fill_coef(size, v0 * inv_p[static_cast<std::size_t>(size)]);
      // Welford update fused with the evaluation of the sample vector.
      stream.update_with(width, [&](std::size_t i) { return term(t.mask, i); });
    }
    report.samples_drawn = n_samples;
  }

  auto& values = report.scores.values();
  for (std::size_t i = 0; i < width; ++i) {
    values[i] = report.c_part[i] + (stream.n > 0 ? stream.mean[i] : 0.0);
  }
  report.variances = stream.variance();
  report.variance_undefined = !plan.sampling_range_empty() && stream.n < 2;
  report.budget_used = counted.calls_used();
  return report;
}

inline EstimateReport shapiq_estimate(const Game& game, IndexKind kind, std::uint64_t budget,
                                      SamplingScheme scheme, std::uint64_t seed) {
  detail::require_min_budget(budget);
  const SamplingPlan plan =
      determine_sampling_order(detail::weights_for(game.players(), scheme, kind), budget);
  return shapiq_estimate(game, kind, plan, budget, seed);
}

// Plan shared by shapiq_sv and the U-KSH comparison: Shapley-kernel sampling
// with k0 = 1, i.e. only ∅ and D enumerated.
inline SamplingPlan sv_plan(int d, std::uint64_t budget) {
  return fixed_order_plan(sampling_weights(d, SamplingScheme::ShapleyKernel), 1, budget);
}

// Shapley values with p(T) ∝ μ(t) and k0 = 1, in the weighted-sum form
//   φ(i) = ν0(D)/d + (2 h_{d-1} / K) Σ_k ν0(T_k) [1(i ∈ T_k) - t_k/d].
// Draws the same coalition stream as shapiq_estimate(SV) on sv_plan.
inline EstimateReport shapiq_sv(const Game& game, std::uint64_t budget, std::uint64_t seed) {
  detail::require_min_budget(budget);
  const int d = game.players();
  if (d < 2) throw PreconditionError("shapiq_sv needs d >= 2");
  const SamplingPlan plan = sv_plan(d, budget);

  BudgetedGame counted(game);
  const CenteredGame centered(counted);
  const double grand = centered.shifted(Coalition::full(d));

  EstimateReport report;
  report.scores = InteractionScores(IndexKind::sv(), d);
  report.k0 = 1;
  report.seed = seed;
  report.order_covered = true;
  report.c_part.assign(static_cast<std::size_t>(d), grand / static_cast<double>(d));

  WelfordState stream(static_cast<std::size_t>(d));
  const std::uint64_t n_samples = plan.sampling_range_empty() ? 0 : plan.budget_remaining;
  const double factor = 2.0 * harmonic(d - 1);
  if (n_samples > 0) {
    CoalitionSampler sampler(plan, seed);
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::uint64_t k = 0; k < n_samples; ++k) {
      const Coalition t = sampler.next();
      const double v0 = centered.shifted(t);
      const double share = static_cast<double>(t.size()) / static_cast<double>(d);
      for (int i = 0; i < d; ++i) {
        x[static_cast<std::size_t>(i)] = factor * v0 * ((t.contains(i) ? 1.0 : 0.0) - share);
      }
      stream.update(x);
    }
  }
  report.samples_drawn = n_samples;

  auto& values = report.scores.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = report.c_part[i] + (stream.n > 0 ? stream.mean[i] : 0.0);
  }
  report.variances = stream.variance();
  report.variance_undefined = n_samples > 0 && stream.n < 2;
  report.budget_used = counted.calls_used();
  report.extras["factor_2h"] = factor;
  return report;
}

struct UkshConstants {
  double mu1 = 0.5;
  double mu2 = 0.0;
  double inv_mu1 = 0.0;  // diagonal entry of A^{-1}
  double inv_mu2 = 0.0;  // off-diagonal entry of A^{-1}
};

// Second moments of Z_T under p(T) ∝ μ(t) on 𝒯_1, and the closed-form inverse of
// A = μ2 J + (μ1 - μ2) I.
inline UkshConstants uksh_constants(int d) {
  if (d < 2) throw PreconditionError("U-KSH needs d >= 2");
  UkshConstants c;
  double num = 0.0;
  for (int k = 2; k <= d - 1; ++k) num += static_cast<double>(k - 1) / static_cast<double>(d - k);
  double den = 0.0;
  for (int k = 1; k <= d - 1; ++k) den += 1.0 / (static_cast<double>(k) * static_cast<double>(d - k));
  c.mu2 = num / (static_cast<double>(d) * static_cast<double>(d - 1) * den);
  const double a = c.mu1 - c.mu2;
  const double b = c.mu1 + static_cast<double>(d - 1) * c.mu2;
  c.inv_mu2 = -c.mu2 / (a * b);
  c.inv_mu1 = (c.mu1 + static_cast<double>(d - 2) * c.mu2) / (a * b);
  return c;
}

struct UkshResult {
  std::vector<double> values;
  UkshConstants constants;
};

// Unbiased KernelSHAP on a given coalition sample:
//   φ = A^{-1} (b - 1 (1ᵀ A^{-1} b - ν0(D)) / (1ᵀ A^{-1} 1)),   b = (1/K) Σ_k Z_k ν0(T_k).
// ν0(D) is evaluated once in addition to the sample.
inline UkshResult uksh_estimate(std::span<const Coalition> coalitions, const Game& game) {
  const int d = game.players();
  if (coalitions.empty()) throw PreconditionError("U-KSH needs at least one coalition");
  for (const Coalition& t : coalitions) {
    if (!t.valid_for(d)) throw InvalidCoalition("coalition has bits beyond d");
    if (t.size() == 0 || t.size() == d) {
      throw PreconditionError("U-KSH coalitions must have size in [1, d-1]");
    }
  }
  UkshResult out;
  out.constants = uksh_constants(d);
  const auto& c = out.constants;

  const CenteredGame centered(game);
  const double grand = centered.shifted(Coalition::full(d));
  std::vector<double> b(static_cast<std::size_t>(d), 0.0);
  for (const Coalition& t : coalitions) {
    const double v0 = centered.shifted(t);
    for (int i = 0; i < d; ++i) {
      if (t.contains(i)) b[static_cast<std::size_t>(i)] += v0;
    }
  }
  const double inv_k = 1.0 / static_cast<double>(coalitions.size());
  double b_sum = 0.0;
  for (double& v : b) {
    v *= inv_k;
    b_sum += v;
  }

  // A^{-1} x = (inv_mu1 - inv_mu2) x + inv_mu2 (1ᵀx) 1
  const double diag = c.inv_mu1 - c.inv_mu2;
  const double row_sum = c.inv_mu1 + static_cast<double>(d - 1) * c.inv_mu2;  // A^{-1} 1, per entry
  const double ones_ainv_b = row_sum * b_sum;
  const double ones_ainv_ones = row_sum * static_cast<double>(d);
  const double lambda = (ones_ainv_b - grand) / ones_ainv_ones;

  double r_sum = 0.0;
  std::vector<double> r(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    r[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - lambda;
    r_sum += r[static_cast<std::size_t>(i)];
  }
  out.values.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    out.values[static_cast<std::size_t>(i)] = diag * r[static_cast<std::size_t>(i)] + c.inv_mu2 * r_sum;
  }
  return out;
}

}  // namespace shapiq

#endif  // SHAPIQ_SHAPIQ_HPP_
