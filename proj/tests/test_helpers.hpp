#pragma once

#include <random>
#include <vector>

#include "fermizones/lattice.hpp"

namespace fztest {

using namespace fermizones;

inline Vec3 random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {u(rng), u(rng), u(rng)};
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v{n(rng), n(rng), n(rng)};
  while (norm(v) < 1e-6) v = {n(rng), n(rng), n(rng)};
  return normalized(v);
}

// Random finite trigonometric series with small wave vectors. The leading
// axis terms keep the level sets closed-surface-like instead of degenerate.
inline DispersionRelation random_dispersion(std::mt19937_64& rng, int extra_terms = 2,
                                            int kmax = 2, bool with_phase = true) {
  std::uniform_int_distribution<int> ki(-kmax, kmax);
  std::uniform_real_distribution<double> amp(0.2, 0.6);
  std::uniform_real_distribution<double> ph(0.0, 6.28);
  std::vector<HarmonicTerm> terms = {
      {{1, 0, 0}, 1.0, 0.0}, {{0, 1, 0}, 1.0, 0.0}, {{0, 0, 1}, 1.0, 0.0}};
  for (int t = 0; t < extra_terms; ++t) {
    Vec3i k{ki(rng), ki(rng), ki(rng)};
    if (k[0] == 0 && k[1] == 0 && k[2] == 0) k[0] = 1;
    terms.push_back({k, amp(rng), with_phase ? ph(rng) : 0.0});
  }
  return DispersionRelation(terms);
}

}  // namespace fztest
