#ifndef SHAPIQ_SCORES_HPP_
#define SHAPIQ_SCORES_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "shapiq/coalition.hpp"
#include "shapiq/errors.hpp"
#include "shapiq/weights.hpp"

namespace shapiq {

// Scores for every interaction subset of an index, stored densely in
// canonical (size, mask) order.
class InteractionScores {
 public:
  InteractionScores() = default;

  // all_orders keeps orders below s0 even for top-order-only kinds (the FSI
  // regression solves for every order up to s0).
  InteractionScores(IndexKind kind, int d, bool all_orders = false)
      : kind_(kind), d_(d),
        subsets_(interaction_subsets(d, kind.s0, kind.top_order_only() && !all_orders)),
        values_(subsets_.size(), 0.0) {
    build_index();
  }

  IndexKind kind() const { return kind_; }
  int players() const { return d_; }
  int max_order() const { return kind_.s0; }
  std::size_t size() const { return subsets_.size(); }

  const std::vector<Coalition>& subsets() const { return subsets_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool contains(Coalition s) const { return position_.count(s.mask) != 0; }

  std::size_t position(Coalition s) const {
    const auto it = position_.find(s.mask);
    if (it == position_.end()) {
      throw SchemaError("subset " + std::to_string(s.mask) + " is not an interaction of this score set");
    }
    return it->second;
  }

  double operator[](Coalition s) const { return values_[position(s)]; }
  double& operator[](Coalition s) { return values_[position(s)]; }

  double at(std::size_t i) const { return values_[i]; }

  // Indices of all subsets of one order, in canonical order.
  std::vector<std::size_t> order_slice(int s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < subsets_.size(); ++i) {
      if (subsets_[i].size() == s) out.push_back(i);
    }
    return out;
  }

  double sum() const {
    double acc = 0.0;
    for (double v : values_) acc += v;
    return acc;
  }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

 private:
  void build_index() {
    position_.reserve(subsets_.size());
    for (std::size_t i = 0; i < subsets_.size(); ++i) position_.emplace(subsets_[i].mask, i);
  }

  IndexKind kind_;
  int d_ = 0;
  std::vector<Coalition> subsets_;
  std::vector<double> values_;
  std::unordered_map<Mask, std::size_t> position_;
};

inline double max_abs_difference(const InteractionScores& a, const InteractionScores& b) {
  if (a.subsets() != b.subsets()) throw SchemaError("score sets cover different interaction subsets");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.at(i) - b.at(i)));
  return worst;
}

}  // namespace shapiq

#endif  // SHAPIQ_SCORES_HPP_
