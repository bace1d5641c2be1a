#ifndef SHAPIQ_WEIGHTS_HPP_
#define SHAPIQ_WEIGHTS_HPP_

#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "shapiq/coalition.hpp"
#include "shapiq/errors.hpp"

namespace shapiq {

enum class Index { SII, STI, FSI, SV };

inline std::string_view to_string(Index index) {
  switch (index) {
    case Index::SII: return "SII";
    case Index::STI: return "STI";
    case Index::FSI: return "FSI";
    case Index::SV: return "SV";
  }
  return "?";
}

inline Index parse_index(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "sii") return Index::SII;
  if (lower == "sti") return Index::STI;
  if (lower == "fsi" || lower == "fsi_top") return Index::FSI;
  if (lower == "sv") return Index::SV;
  throw ConfigError("unknown interaction index '" + std::string(name) + "'");
}

// An interaction index together with its maximum order s0. FSI only has
// closed-form weights at the top order, so its interaction set is just the
// subsets of size s0.
struct IndexKind {
  Index tag = Index::SII;
  int s0 = 1;

  IndexKind() = default;
  IndexKind(Index t, int order) : tag(t), s0(order) {
    if (order < 1) throw PreconditionError("interaction order must be >= 1");
    if (t == Index::SV && order != 1) throw PreconditionError("the Shapley value has order 1");
  }

  static IndexKind sv() { return {Index::SV, 1}; }

  bool top_order_only() const { return tag == Index::FSI; }
  int min_order() const { return top_order_only() ? s0 : 1; }
};

// CII weight m_s(t) for an index of maximum order s0 on d players, evaluated
// as ratios of binomials so that no factorial is ever formed.
//
//   SII, SV   m_s(t) = (d-t-s)! t! / (d-s+1)!          = 1 / ((d-s+1) C(d-s, t))
//   STI top   m_s0(t) = s0 (d-t-1)! t! / d!            = s0 / (d C(d-1, t))
//   STI lower m_s(t) = 1(t = 0)                          (discrete derivative at ∅)
//   FSI top   m_s0(t) = (2s0-1)!/((s0-1)!)^2 (d-t-1)!(t+s0-1)!/(d+s0-1)!
inline double weight_m(IndexKind kind, int d, int s, int t) {
  if (s < 1 || s > kind.s0 || s > d) {
    throw RangeError("order s=" + std::to_string(s) + " outside [1, min(s0, d)]");
  }
  if (t < 0 || t > d - s) {
    throw RangeError("size t=" + std::to_string(t) + " outside [0, d-s]");
  }
  switch (kind.tag) {
    case Index::SII:
    case Index::SV:
      return 1.0 / (static_cast<double>(d - s + 1) * binom(d - s, t));
    case Index::STI:
      if (s < kind.s0) return t == 0 ? 1.0 : 0.0;
      return static_cast<double>(kind.s0) / (static_cast<double>(d) * binom(d - 1, t));
    case Index::FSI: {
      if (s != kind.s0) {
        throw UnsupportedOrder("FSI weights are only available in closed form for the top order s0=" +
                               std::to_string(kind.s0));
      }
      const int s0 = kind.s0;
      const double lead = static_cast<double>(2 * s0 - 1) * binom(2 * s0 - 2, s0 - 1);
      return lead / (static_cast<double>(d + s0 - 1) * binom(d + s0 - 2, t + s0 - 1));
    }
  }
  return 0.0;
}

// γ_s(t, k) = (-1)^(s-k) m_s(t-k). Throws RangeError if t-k leaves [0, d-s].
inline double gamma(IndexKind kind, int d, int s, int t, int k) {
  if (k < 0 || k > s || k > t) throw RangeError("intersection size k outside [0, min(s, t)]");
  if (t - k < 0 || t - k > d - s) throw RangeError("t-k outside [0, d-s]");
  const double m = weight_m(kind, d, s, t - k);
  return ((s - k) % 2 == 0) ? m : -m;
}

// Precomputed m and γ tables for one (kind, d). Immutable and shareable.
class WeightFamily {
 public:
  WeightFamily(IndexKind kind, int d) : kind_(kind), d_(d) {
    if (d < 1 || d > kMaxPlayers) throw CapacityError("player count outside [1, 63]");
    if (kind.s0 > d) throw PreconditionError("interaction order exceeds player count");
    const int stride_t = d + 1;
    const int stride_s = stride_t * (kind.s0 + 1);
    m_.assign(static_cast<std::size_t>(kind.s0 + 1) * static_cast<std::size_t>(stride_t), 0.0);
    gamma_.assign(static_cast<std::size_t>(kind.s0 + 1) * static_cast<std::size_t>(stride_s), 0.0);
    stride_t_ = stride_t;
    stride_s_ = stride_s;
    for (int s = kind.min_order(); s <= kind.s0; ++s) {
      for (int t = 0; t <= d - s; ++t) m_[index_m(s, t)] = weight_m(kind, d, s, t);
      for (int t = 0; t <= d; ++t) {
        for (int k = 0; k <= s && k <= t; ++k) {
          const int rest = t - k;
          if (rest > d - s) continue;
          const double m = m_[index_m(s, rest)];
          gamma_[index_gamma(s, t, k)] = ((s - k) % 2 == 0) ? m : -m;
        }
      }
    }
  }

  IndexKind kind() const { return kind_; }
  int players() const { return d_; }

  double m(int s, int t) const { return m_[index_m(s, t)]; }

  // Zero wherever (t, k) cannot occur for a subset of size s.
  double gamma(int s, int t, int k) const { return gamma_[index_gamma(s, t, k)]; }

 private:
  std::size_t index_m(int s, int t) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(stride_t_) + static_cast<std::size_t>(t);
  }
  std::size_t index_gamma(int s, int t, int k) const {
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(stride_s_) +
           static_cast<std::size_t>(s) * static_cast<std::size_t>(stride_t_) + static_cast<std::size_t>(t);
  }

  IndexKind kind_;
  int d_;
  int stride_t_ = 0;
  int stride_s_ = 0;
  std::vector<double> m_;
  std::vector<double> gamma_;
};

// Shapley kernel μ(t) = 1 / ((d-1) C(d-2, t-1)), defined for 1 <= t <= d-1.
inline double shapley_kernel(int d, int t) {
  if (d < 2 || t < 1 || t > d - 1) {
    throw RangeError("Shapley kernel undefined at t=" + std::to_string(t) + " for d=" + std::to_string(d));
  }
  return 1.0 / (static_cast<double>(d - 1) * binom(d - 2, t - 1));
}

// h_n = 1 + 1/2 + ... + 1/n.
inline double harmonic(int n) {
  double h = 0.0;
  for (int i = n; i >= 1; --i) h += 1.0 / static_cast<double>(i);
  return h;
}

enum class SamplingScheme { ShapleyKernel, SiiTail };

inline std::string_view to_string(SamplingScheme scheme) {
  return scheme == SamplingScheme::ShapleyKernel ? "shapley_kernel" : "sii_tail";
}

inline SamplingScheme parse_scheme(std::string_view name) {
  if (name == "shapley_kernel") return SamplingScheme::ShapleyKernel;
  if (name == "sii_tail") return SamplingScheme::SiiTail;
  throw ConfigError("unknown sampling scheme '" + std::string(name) + "'");
}

// Per-size sampling weights q(t). Sizes carrying the "always enumerate"
// weight q0 are stored as +infinity: the sampling-order search treats them
// as deterministic as soon as the remaining budget covers them.
struct SamplingWeights {
  int d = 0;
  SamplingScheme scheme = SamplingScheme::ShapleyKernel;
  std::vector<double> q;

  static constexpr double kTail = std::numeric_limits<double>::infinity();

  bool is_tail(int t) const { return std::isinf(q[static_cast<std::size_t>(t)]); }
};

// shapley_kernel: q(t) = μ(t) inside, q0 at t in {0, d}.
// sii_tail:       q(t) = (d-t-s0)!(t-s0)!/(d-s0+1)! for s0 <= t <= d-s0, q0 elsewhere.
inline SamplingWeights sampling_weights(int d, SamplingScheme scheme, int s0 = 1) {
  if (d < 2) throw PreconditionError("sampling weights need d >= 2");
  SamplingWeights w;
  w.d = d;
  w.scheme = scheme;
  w.q.assign(static_cast<std::size_t>(d) + 1, SamplingWeights::kTail);
  if (scheme == SamplingScheme::ShapleyKernel) {
    for (int t = 1; t <= d - 1; ++t) w.q[static_cast<std::size_t>(t)] = shapley_kernel(d, t);
  } else {
    if (s0 < 1) throw PreconditionError("sii_tail needs s0 >= 1");
    for (int t = s0; t <= d - s0; ++t) {
      // (d-2s0)! / (d-s0+1)! / C(d-2s0, t-s0)
      double ratio = 1.0;
      for (int i = d - 2 * s0 + 1; i <= d - s0 + 1; ++i) ratio /= static_cast<double>(i);
      w.q[static_cast<std::size_t>(t)] = ratio / binom(d - 2 * s0, t - s0);
    }
  }
  return w;
}

// Bernoulli numbers B_0..B_n with B_1 = -1/2, from
// Σ_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1.
inline std::vector<double> bernoulli_numbers(int n_max) {
  if (n_max < 0) throw PreconditionError("n_max must be >= 0");
  std::vector<double> b(static_cast<std::size_t>(n_max) + 1, 0.0);
  b[0] = 1.0;
  for (int m = 1; m <= n_max; ++m) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += binom(m + 1, j) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(m)] = -acc / static_cast<double>(m + 1);
    if (m >= 3 && m % 2 == 1) b[static_cast<std::size_t>(m)] = 0.0;
  }
  return b;
}

}  // namespace shapiq

#endif  // SHAPIQ_WEIGHTS_HPP_
