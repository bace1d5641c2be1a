#ifndef SHAPIQ_NSII_HPP_
#define SHAPIQ_NSII_HPP_

#include <vector>

#include "shapiq/coalition.hpp"
#include "shapiq/errors.hpp"
#include "shapiq/games.hpp"
#include "shapiq/scores.hpp"
#include "shapiq/weights.hpp"

namespace shapiq {

struct NsiiScores {
  InteractionScores base;    // SII input
  int s0 = 1;
  InteractionScores scores;  // n-SII values on all S with |S| <= s0
};

// n-SII of order s0 from SII scores:
//   nSII(S) = SII(S) + Σ_{k=1}^{s0-s} B_k Σ_{K ⊆ D\S, |K| = k} SII(S ∪ K),
// Bernoulli numbers with B_1 = -1/2. The top order passes through unchanged.
inline NsiiScores aggregate_nsii(const InteractionScores& sii, int s0) {
  if (sii.kind().tag != Index::SII && sii.kind().tag != Index::SV) {
    throw PreconditionError("n-SII aggregates SII scores");
  }
  const int d = sii.players();
  if (s0 < 1 || s0 > sii.max_order()) {
    throw PreconditionError("aggregation order " + std::to_string(s0) + " needs SII scores of every order up to it");
  }
  const std::vector<double> bernoulli = bernoulli_numbers(s0);

  NsiiScores out;
  out.base = sii;
  out.s0 = s0;
  out.scores = InteractionScores(IndexKind(Index::SII, s0), d);
  for (Coalition s : out.scores.subsets()) {
    if (!sii.contains(s)) throw PreconditionError("SII input is missing order " + std::to_string(s.size()));
  }

  const Coalition all = Coalition::full(d);
  auto& values = out.scores.values();
  for (std::size_t i = 0; i < out.scores.size(); ++i) {
    const Coalition s = out.scores.subsets()[i];
    double acc = sii[s];
    for_each_subset_upto(Coalition(all.mask & ~s.mask), s0 - s.size(), [&](Coalition k) {
      acc += bernoulli[static_cast<std::size_t>(k.size())] * sii[s | k];
    });
    values[i] = acc;
  }
  return out;
}

// Σ scores - ν0(D) over every subset held by the score set.
inline double efficiency_gap(const InteractionScores& scores, const Game& game) {
  const int d = game.players();
  if (scores.players() != d) throw PreconditionError("scores and game disagree on player count");
  return scores.sum() - (game.eval(Coalition::full(d)) - game.eval(Coalition{}));
}

inline double efficiency_gap(const NsiiScores& scores, const Game& game) {
  return efficiency_gap(scores.scores, game);
}

}  // namespace shapiq

#endif  // SHAPIQ_NSII_HPP_
