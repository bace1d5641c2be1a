#ifndef SHAPIQ_BASELINES_HPP_
#define SHAPIQ_BASELINES_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "shapiq/coalition.hpp"
#include "shapiq/errors.hpp"
#include "shapiq/exact.hpp"
#include "shapiq/games.hpp"
#include "shapiq/rng.hpp"
#include "shapiq/sampling.hpp"
#include "shapiq/scores.hpp"
#include "shapiq/shapiq.hpp"
#include "shapiq/weights.hpp"

namespace shapiq {

struct Permutation {
  std::vector<int> order;

  static Permutation random(int d, Rng& rng) {
    Permutation p;
    p.order.resize(static_cast<std::size_t>(d));
    std::iota(p.order.begin(), p.order.end(), 0);
    rng.shuffle(p.order);
    return p;
  }

  // prefix[m] = players at positions 0..m-1.
  std::vector<Mask> prefix_masks() const {
    std::vector<Mask> prefix(order.size() + 1, 0);
    for (std::size_t m = 0; m < order.size(); ++m) prefix[m + 1] = prefix[m] | (Mask{1} << order[m]);
    return prefix;
  }
};

// Evaluations per permutation: Σ_{s=1}^{s0} 2^s (d - s + 1).
inline std::uint64_t pb_sii_permutation_cost(int d, int s0) {
  std::uint64_t cost = 0;
  for (int s = 1; s <= s0; ++s) cost += (std::uint64_t{1} << s) * static_cast<std::uint64_t>(d - s + 1);
  return cost;
}

// Top-order evaluations per permutation: 2^s0 C(d, s0).
inline std::uint64_t pb_sti_permutation_cost(int d, int s0) {
  return (std::uint64_t{1} << s0) * static_cast<std::uint64_t>(binom(d, s0));
}

// Evaluations of the exact lower-order phase: every coalition of size < s0.
inline std::uint64_t pb_sti_lower_cost(int d, int s0) {
  std::uint64_t cost = 0;
  for (int k = 0; k < s0; ++k) cost += static_cast<std::uint64_t>(binom(d, k));
  return cost;
}

namespace detail {

inline void check_order(int d, int s0) {
  check_player_count(d);
  if (s0 < 1 || s0 > d) throw PreconditionError("interaction order must lie in [1, d]");
}

}  // namespace detail

// SII by averaging δ_S over windows of random permutations. Each permutation
// updates the d - s + 1 contiguous windows of every order s; T is the set of
// players before the window. Subsets that no permutation visited stay at 0
// with count 0.
inline EstimateReport pb_sii(const Game& game, int s0, std::uint64_t budget, std::uint64_t seed) {
  const int d = game.players();
  detail::check_order(d, s0);
  const std::uint64_t cost = pb_sii_permutation_cost(d, s0);
  if (budget < cost) {
    throw InsufficientBudget("budget " + std::to_string(budget) + " is below one permutation (" +
                             std::to_string(cost) + " evaluations)");
  }
  BudgetedGame counted(game, budget);
  Rng rng(seed);

  EstimateReport report;
  report.scores = InteractionScores(IndexKind(Index::SII, s0), d);
  report.seed = seed;
  const std::size_t width = report.scores.size();
  std::vector<double> sum(width, 0.0);
  report.counts.assign(width, 0);

  std::uint64_t remaining = budget;
  std::uint64_t permutations = 0;
  while (remaining >= cost) {
    const Permutation pi = Permutation::random(d, rng);
    const auto prefix = pi.prefix_masks();
    for (int s = 1; s <= s0; ++s) {
      for (int m = 0; m + s <= d; ++m) {
        const Coalition window(prefix[static_cast<std::size_t>(m + s)] & ~prefix[static_cast<std::size_t>(m)]);
        const std::size_t pos = report.scores.position(window);
        sum[pos] += discrete_derivative(counted, window, Coalition(prefix[static_cast<std::size_t>(m)]));
        ++report.counts[pos];
      }
    }
    remaining -= cost;
    ++permutations;
  }

  auto& values = report.scores.values();
  std::uint64_t unvisited = 0;
  for (std::size_t i = 0; i < width; ++i) {
    if (report.counts[i] == 0) {
      ++unvisited;
      continue;
    }
    values[i] = sum[i] / static_cast<double>(report.counts[i]);
  }
  report.samples_drawn = permutations;
  report.budget_used = counted.calls_used();
  report.variances.assign(width, 0.0);
  report.extras["permutations"] = static_cast<double>(permutations);
  report.extras["unvisited_subsets"] = static_cast<double>(unvisited);
  return report;
}

// STI with orders below s0 computed exactly (δ_S(∅) from ν on all coalitions
// of size < s0) and the top order averaged over permutations, where T is the
// set of players preceding the leftmost member of S. The top phase does not
// reuse the lower-phase table; extras["budget_used_with_reuse"] reports what
// the run would have cost if it had.
inline EstimateReport pb_sti(const Game& game, int s0, std::uint64_t budget, std::uint64_t seed) {
  const int d = game.players();
  detail::check_order(d, s0);
  const std::uint64_t lower_cost = pb_sti_lower_cost(d, s0);
  const std::uint64_t cost = pb_sti_permutation_cost(d, s0);
  if (budget < lower_cost + cost) {
    throw InsufficientBudget("budget " + std::to_string(budget) + " cannot cover the exact lower orders (" +
                             std::to_string(lower_cost) + ") plus one permutation (" + std::to_string(cost) + ")");
  }
  BudgetedGame counted(game, budget);
  Rng rng(seed);

  const IndexKind kind(Index::STI, s0);
  EstimateReport report;
  report.scores = InteractionScores(kind, d);
  report.seed = seed;
  report.k0 = 0;
  const std::size_t width = report.scores.size();
  report.counts.assign(width, 0);
  auto& values = report.scores.values();

  std::unordered_map<Mask, double> lower;
  lower.reserve(static_cast<std::size_t>(lower_cost));
  for (int k = 0; k < s0; ++k) {
    for_each_subset_of_size(d, k, [&](Coalition t) { lower.emplace(t.mask, counted.eval(t)); });
  }
  for (std::size_t i = 0; i < width; ++i) {
    const Coalition s = report.scores.subsets()[i];
    if (s.size() == s0) continue;
    double acc = 0.0;
    for_each_submask(s, [&](Coalition l) {
      const double v = lower.at(l.mask);
      acc += ((s.size() - l.size()) % 2 == 0) ? v : -v;
    });
    values[i] = acc;
    report.counts[i] = 1;
  }

  const std::vector<std::size_t> top = report.scores.order_slice(s0);
  std::vector<double> sum(width, 0.0);
  std::vector<int> rank(static_cast<std::size_t>(d));
  std::uint64_t remaining = budget - lower_cost;
  std::uint64_t permutations = 0;
  std::uint64_t reusable = 0;
  while (remaining >= cost) {
    const Permutation pi = Permutation::random(d, rng);
    const auto prefix = pi.prefix_masks();
    for (int m = 0; m < d; ++m) rank[static_cast<std::size_t>(pi.order[static_cast<std::size_t>(m)])] = m;
    for (std::size_t i : top) {
      const Coalition s = report.scores.subsets()[i];
      int first = d;
      for (int p : s.players()) first = std::min(first, rank[static_cast<std::size_t>(p)]);
      const Coalition t(prefix[static_cast<std::size_t>(first)]);
      for_each_submask(s, [&](Coalition l) {
        if ((t | l).size() < s0) ++reusable;
      });
      sum[i] += discrete_derivative(counted, s, t);
      ++report.counts[i];
    }
    remaining -= cost;
    ++permutations;
  }
  for (std::size_t i : top) values[i] = sum[i] / static_cast<double>(report.counts[i]);

  report.samples_drawn = permutations;
  report.budget_used = counted.calls_used();
  report.variances.assign(width, 0.0);
  report.extras["permutations"] = static_cast<double>(permutations);
  report.extras["budget_used_with_reuse"] = static_cast<double>(report.budget_used - reusable);
  return report;
}

// Weighted least squares in sparse-row form. Each row lists the columns
// where its binary encoding is 1.
struct WlsSystem {
  struct Row {
    std::vector<std::uint32_t> cols;
    double weight = 0.0;
    double y = 0.0;
  };

  std::size_t columns = 0;
  std::vector<Row> rows;
  // Optional column labels for error messages.
  std::vector<Coalition> labels;

  void add_row(std::vector<std::uint32_t> cols, double weight, double y) {
    rows.push_back({std::move(cols), weight, y});
  }
};

namespace detail {

inline std::string describe_direction(const Eigen::VectorXd& v, const std::vector<Coalition>& labels) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return std::abs(v[a]) > std::abs(v[b]); });
  std::ostringstream os;
  const std::size_t shown = std::min<std::size_t>(idx.size(), 4);
  for (std::size_t k = 0; k < shown; ++k) {
    const Eigen::Index c = idx[k];
    if (k) os << ", ";
    os << std::showpos << v[c] << std::noshowpos << "*";
    if (static_cast<std::size_t>(c) < labels.size()) {
      os << "{";
      const auto players = labels[static_cast<std::size_t>(c)].players();
      for (std::size_t j = 0; j < players.size(); ++j) os << (j ? "," : "") << players[j];
      os << "}";
    } else {
      os << "col" << c;
    }
  }
  return os.str();
}

}  // namespace detail

// Solves ZᵀWZ β = ZᵀWy by LDLᵀ with pivoting. If the smallest pivot falls
// below 1e-12 of the largest, a ridge of 1e-10 trace/n is added once, unless
// the matrix has an exact null direction, which is reported instead.
inline std::vector<double> wls_solve(const WlsSystem& system) {
  const auto n = static_cast<Eigen::Index>(system.columns);
  if (n == 0) throw PreconditionError("WLS system without columns");
  if (system.rows.size() < system.columns) {
    throw PreconditionError("WLS system has fewer rows (" + std::to_string(system.rows.size()) +
                            ") than columns (" + std::to_string(system.columns) + ")");
  }
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (const auto& row : system.rows) {
    if (!(row.weight > 0.0)) throw PreconditionError("WLS row weights must be positive");
    for (std::uint32_t a : row.cols) {
      rhs[a] += row.weight * row.y;
      for (std::uint32_t b : row.cols) normal(a, b) += row.weight;
    }
  }

  auto singular = [](const Eigen::LDLT<Eigen::MatrixXd>& f) {
    if (f.info() != Eigen::Success) return true;
    const Eigen::VectorXd piv = f.vectorD().cwiseAbs();
    return piv.minCoeff() < 1e-12 * piv.maxCoeff();
  };

  Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  if (singular(ldlt)) {
    // The ridge always lifts the pivots above the threshold, so "still
    // singular" is decided on the spectrum: a numerical null space means the
    // ridge would only pick one of many solutions.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
    const Eigen::VectorXd lambda = eig.eigenvalues();
    const double tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * lambda.cwiseAbs().maxCoeff();
    if (lambda[0] <= tol) {
      throw SolverError("normal matrix is singular after ridge regularization; null direction " +
                        detail::describe_direction(eig.eigenvectors().col(0), system.labels));
    }
    const double ridge = 1e-10 * normal.trace() / static_cast<double>(n);
    Eigen::MatrixXd regularized = normal;
    regularized.diagonal().array() += ridge;
    ldlt.compute(regularized);
    if (ldlt.info() != Eigen::Success) throw SolverError("LDLT failed on the regularized normal matrix");
  }
  const Eigen::VectorXd beta = ldlt.solve(rhs);
  return {beta.data(), beta.data() + beta.size()};
}

// FSI by the constrained kernel regression. Columns are all S with
// 1 <= |S| <= s0. Rows: the grand coalition as constraint (weight 1e7 times
// the largest data weight), every coalition of T_1 outside the sampling range
// with weight μ(t)/R, R = Σ_{k=1}^{d-1} μ(k) C(d, k), and the sampled
// coalitions merged per distinct coalition with weight count * w0 / K, w0 the
// kernel mass of the sampling range. The constraint target is corrected
// until Σ β matches ν0(D).
inline EstimateReport kb_fsi(const Game& game, int s0, std::uint64_t budget, std::uint64_t seed,
                             double constraint_scale = 1e7) {
  const int d = game.players();
  detail::check_order(d, s0);
  if (d < 2) throw PreconditionError("kb_fsi needs d >= 2");
  const IndexKind kind(Index::FSI, s0);

  EstimateReport report;
  report.scores = InteractionScores(kind, d, /*all_orders=*/true);
  report.seed = seed;
  const std::size_t width = report.scores.size();
  if (budget < 2 + width) {
    throw InsufficientBudget("budget " + std::to_string(budget) + " below 2 + " + std::to_string(width) +
                             " needed for a solvable system");
  }

  const SamplingWeights q = sampling_weights(d, SamplingScheme::ShapleyKernel);
  const SamplingPlan plan = determine_sampling_order(q, budget);
  report.k0 = plan.k0;
  report.order_covered = plan.k0 >= s0;

  BudgetedGame counted(game, budget);
  const CenteredGame centered(counted);

  double kernel_total = 0.0;
  for (int t = 1; t <= d - 1; ++t) kernel_total += q.q[static_cast<std::size_t>(t)] * binom(d, t);

  WlsSystem system;
  system.columns = width;
  system.labels = report.scores.subsets();
  auto encode = [&](Coalition t) {
    std::vector<std::uint32_t> cols;
    for_each_subset_upto(t, s0, [&](Coalition s) {
      cols.push_back(static_cast<std::uint32_t>(report.scores.position(s)));
    });
    return cols;
  };

  for_each_border_coalition(plan, [&](Coalition t) {
    const int size = t.size();
    if (size == 0 || size == d) return;
    system.add_row(encode(t), q.q[static_cast<std::size_t>(size)] / kernel_total, centered.shifted(t));
  });

  std::uint64_t n_samples = 0;
  if (!plan.sampling_range_empty()) {
    n_samples = plan.budget_remaining;
    if (plan.k0 == 0) n_samples = n_samples >= 2 ? n_samples - 2 : 0;  // ∅ and D charged separately
  }
  if (n_samples > 0) {
    double w0 = 0.0;
    for (int t = std::max(plan.k0, 1); t <= std::min(d - plan.k0, d - 1); ++t) {
      w0 += q.q[static_cast<std::size_t>(t)] * binom(d, t) / kernel_total;
    }
    CoalitionSampler sampler(plan, seed);
    std::unordered_map<Mask, std::size_t> index;
    const std::size_t first_sampled = system.rows.size();
    for (std::uint64_t k = 0; k < n_samples; ++k) {
      const Coalition t = sampler.next();
      if (auto it = index.find(t.mask); it != index.end()) {
        system.rows[it->second].weight += 1.0;
        continue;
      }
      // Tail sizes can only land here when the budget could not enumerate
      // them; ∅ and D carry no kernel weight and are skipped.
      if (t.empty() || t.size() == d) continue;
      index.emplace(t.mask, system.rows.size());
      system.add_row(encode(t), 1.0, centered.shifted(t));
    }
    const double scale = w0 / static_cast<double>(n_samples);
    for (std::size_t r = first_sampled; r < system.rows.size(); ++r) system.rows[r].weight *= scale;
  }
  report.samples_drawn = n_samples;

  double max_weight = 0.0;
  for (const auto& row : system.rows) max_weight = std::max(max_weight, row.weight);
  std::vector<std::uint32_t> all(width);
  std::iota(all.begin(), all.end(), 0u);
  const double grand = centered.shifted(Coalition::full(d));
  system.add_row(std::move(all), constraint_scale * (max_weight > 0.0 ? max_weight : 1.0), grand);

  // The finite constraint weight leaves a gap of order 1/c0 in Σ β. Shifting
  // the constraint target by the gap (augmented Lagrangian) removes it.
  std::vector<double> beta = wls_solve(system);
  for (int iter = 0; iter < 3; ++iter) {
    const double gap = grand - std::accumulate(beta.begin(), beta.end(), 0.0);
    if (std::abs(gap) <= 1e-13 * std::max(1.0, std::abs(grand))) break;
    system.rows.back().y += gap;
    beta = wls_solve(system);
  }
  report.scores.values() = std::move(beta);
  report.budget_used = counted.calls_used();
  report.variances.assign(width, 0.0);
  report.extras["rows"] = static_cast<double>(system.rows.size());
  return report;
}

}  // namespace shapiq

#endif  // SHAPIQ_BASELINES_HPP_
