#pragma once

#include "nrcs/model.hpp"

namespace nrcs {

/// Independent weight draws on [0.1, 2] for every edge and channel. Equal
/// weighting draws once per edge and shares it across channels.
inline WeightAssignment sample_random_weights(const DiGraph& g, Fashion fashion, int r, RandomSource& rng) {
  check_fashion(fashion, r);
  const int count = fashion == Fashion::kMultiWeighted ? r : 1;
  WeightAssignment w{fashion, {}};
  for (int k = 0; k < count; ++k) {
    Vector v(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) v(e) = rng.nonzero();
    w.channels.push_back(std::move(v));
  }
  return w;
}

/// Nonzero draw with a random sign, magnitude on [0.1, 2].
inline double signed_nonzero(RandomSource& rng) {
  const double magnitude = rng.nonzero();
  return rng.unit() < 0.5 ? -magnitude : magnitude;
}

}  // namespace nrcs
