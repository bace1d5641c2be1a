#ifndef SHAPIQ_METRICS_HPP_
#define SHAPIQ_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <vector>

#include "shapiq/coalition.hpp"
#include "shapiq/errors.hpp"
#include "shapiq/scores.hpp"

namespace shapiq {

namespace detail {

struct OrderPairs {
  std::vector<Coalition> subsets;
  std::vector<double> est;
  std::vector<double> truth;
};

// Truth subsets of order s with the matching estimates.
inline OrderPairs pair_order(const InteractionScores& est, const InteractionScores& truth, int s) {
  OrderPairs out;
  for (std::size_t i : truth.order_slice(s)) {
    const Coalition subset = truth.subsets()[i];
    if (!est.contains(subset)) {
      throw SchemaError("estimate has no score for a subset of order " + std::to_string(s));
    }
    out.subsets.push_back(subset);
    out.truth.push_back(truth.at(i));
    out.est.push_back(est[subset]);
  }
  if (out.subsets.empty()) throw SchemaError("ground truth has no subsets of order " + std::to_string(s));
  if (est.order_slice(s).size() != out.subsets.size()) {
    throw SchemaError("estimate and ground truth cover different subsets of order " + std::to_string(s));
  }
  return out;
}

// Positions of the k largest |values|, ties broken by smaller mask.
inline std::vector<std::size_t> top_k(const std::vector<double>& values, const std::vector<Coalition>& subsets,
                                      std::size_t k) {
  std::vector<std::size_t> idx(values.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double va = std::abs(values[a]);
    const double vb = std::abs(values[b]);
    if (va != vb) return va > vb;
    return subsets[a].mask < subsets[b].mask;
  });
  idx.resize(std::min(k, idx.size()));
  return idx;
}

inline double mean_squared(const OrderPairs& p, const std::vector<std::size_t>& which) {
  double acc = 0.0;
  for (std::size_t i : which) {
    const double e = p.est[i] - p.truth[i];
    acc += e * e;
  }
  return acc / static_cast<double>(which.size());
}

}  // namespace detail

inline double mse(const InteractionScores& est, const InteractionScores& truth, int s) {
  const auto p = detail::pair_order(est, truth, s);
  std::vector<std::size_t> all(p.subsets.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return detail::mean_squared(p, all);
}

// MSE over the k subsets of order s with the largest |truth|.
inline double mse_at_k(const InteractionScores& est, const InteractionScores& truth, int s, std::size_t k) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  const auto p = detail::pair_order(est, truth, s);
  return detail::mean_squared(p, detail::top_k(p.truth, p.subsets, k));
}

// |topK(|est|) ∩ topK(|truth|)| / k.
inline double prec_at_k(const InteractionScores& est, const InteractionScores& truth, int s, std::size_t k) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  const auto p = detail::pair_order(est, truth, s);
  const auto top_est = detail::top_k(p.est, p.subsets, k);
  const auto top_truth = detail::top_k(p.truth, p.subsets, k);
  const std::set<std::size_t> truth_set(top_truth.begin(), top_truth.end());
  std::size_t hits = 0;
  for (std::size_t i : top_est) hits += truth_set.count(i);
  return static_cast<double>(hits) / static_cast<double>(std::min(k, p.subsets.size()));
}

}  // namespace shapiq

#endif  // SHAPIQ_METRICS_HPP_
