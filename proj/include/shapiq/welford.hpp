#ifndef SHAPIQ_WELFORD_HPP_
#define SHAPIQ_WELFORD_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "shapiq/errors.hpp"

namespace shapiq {

// Running mean and sum of squared deviations for a vector of streams that
// are updated together.
struct WelfordState {
  std::uint64_t n = 0;
  std::vector<double> mean;
  std::vector<double> s2;

  WelfordState() = default;
  explicit WelfordState(std::size_t width) : mean(width, 0.0), s2(width, 0.0) {}

  std::size_t width() const { return mean.size(); }

  void update(std::span<const double> x) {
    if (x.size() != mean.size()) throw PreconditionError("Welford update with mismatched width");
    ++n;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double delta = x[i] - mean[i];
      mean[i] += delta * inv_n;
      s2[i] += delta * (x[i] - mean[i]);
    }
  }

  // Same update with x_i = value(i), without materializing x.
  template <class Fn>
  void update_with(std::size_t w, Fn&& value) {
    if (w != mean.size()) throw PreconditionError("Welford update with mismatched width");
    ++n;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < w; ++i) {
      const double x = value(i);
      const double delta = x - mean[i];
      mean[i] += delta * inv_n;
      s2[i] += delta * (x - mean[i]);
    }
  }

  // Unbiased sample variance s2/(n-1); zero when n < 2.
  std::vector<double> variance() const {
    std::vector<double> out(width(), 0.0);
    if (n < 2) return out;
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s2[i] / denom;
    return out;
  }
};

inline WelfordState welford_update(WelfordState state, std::span<const double> values) {
  state.update(values);
  return state;
}

}  // namespace shapiq

#endif  // SHAPIQ_WELFORD_HPP_
