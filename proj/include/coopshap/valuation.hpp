#pragma once

// Additive and ratio-based Shapley valuations.
//
// Three routes compute the same permutation average:
//   shapley_exact            subset-weight formula, O(n * 2^n), production path
//   shapley_permutation_oracle  literal n! enumeration, the independent oracle
//   shapley_monte_carlo      seeded sampling of random permutations
//
// The subset-weight reformulation equals the permutation average because a
// player's marginal depends only on the set of predecessors, never on their
// order; the weight |S|! (n-|S|-1)! / n! counts the permutations with
// predecessor set S.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "coopshap/game.hpp"

namespace coopshap {

enum class Scheme { additive, ratio };

inline const char* scheme_name(Scheme s) {
  return s == Scheme::additive ? "additive" : "ratio";
}

enum class Method { exact, permutation_oracle, monte_carlo };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::permutation_oracle: return "oracle";
    default: return "mc";
  }
}

struct ValuationVector {
  std::vector<double> phi;   // one entry per player
  Scheme scheme = Scheme::additive;
  Method method = Method::exact;
  std::uint64_t samples = 0;         // monte_carlo only
  std::uint64_t seed = 0;            // monte_carlo only
  std::vector<double> std_error;     // monte_carlo only, per player

  double max_phi() const { return *std::max_element(phi.begin(), phi.end()); }
};

// v(C u {i}) - v(C). Non-negative for monotone games.
inline double delta_abs(const Game& game, int player, CoalitionMask c) {
  if (contains(c, player))
    throw std::invalid_argument("delta_abs: player already in coalition");
  return game.value(c | player_bit(player)) - game.value(c);
}

// v(C u {i}) / v(C) - 1 when v(C) != 0, else 0.
inline double delta_rel(const Game& game, int player, CoalitionMask c) {
  if (contains(c, player))
    throw std::invalid_argument("delta_rel: player already in coalition");
  const double base = game.value(c);
  if (base == 0.0) return 0.0;
  return game.value(c | player_bit(player)) / base - 1.0;
}

inline double marginal(const Game& game, Scheme scheme, int player, CoalitionMask c) {
  return scheme == Scheme::additive ? delta_abs(game, player, c)
                                    : delta_rel(game, player, c);
}

// Subset-weight Shapley value. Marginals are accumulated per predecessor-set
// size, then each bucket gets its weight once; the weights are built by the
// ratio recurrence w(s+1) = w(s) * (s+1) / (n-1-s), which stays in range for
// any n this library accepts (no factorial overflow).
inline ValuationVector shapley_exact(const Game& game, Scheme scheme) {
  const int n = game.player_count();
  const CoalitionMask all = game.grand_coalition();

  std::vector<double> weights(n);
  weights[0] = 1.0 / n;
  for (int s = 0; s + 1 < n; ++s) {
    weights[s + 1] = weights[s] * (s + 1) / (n - 1 - s);
  }

  ValuationVector out;
  out.scheme = scheme;
  out.method = Method::exact;
  out.phi.assign(n, 0.0);
  std::vector<double> bucket(n);
  for (int i = 0; i < n; ++i) {
    std::fill(bucket.begin(), bucket.end(), 0.0);
    for (CoalitionMask m = 0; m <= all; ++m) {
      if (contains(m, i)) continue;
      bucket[coalition_size(m)] += marginal(game, scheme, i, m);
    }
    double phi = 0.0;
    for (int s = 0; s < n; ++s) phi += weights[s] * bucket[s];
    out.phi[i] = phi;
  }
  return out;
}

// Literal enumeration of all n! player orderings. Slow by design; exists as
// the independent check on shapley_exact.
inline ValuationVector shapley_permutation_oracle(const Game& game, Scheme scheme) {
  const int n = game.player_count();
  if (n > kMaxPlayersOracle)
    throw std::invalid_argument("shapley_permutation_oracle: n! enumeration refused for n > 10");

  ValuationVector out;
  out.scheme = scheme;
  out.method = Method::permutation_oracle;
  out.phi.assign(n, 0.0);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    CoalitionMask predecessors = 0;
    for (int i : perm) {
      out.phi[i] += marginal(game, scheme, i, predecessors);
      predecessors |= player_bit(i);
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));

  for (double& phi : out.phi) phi /= static_cast<double>(count);
  return out;
}

// Plain Monte Carlo estimate over uniformly random permutations, one pass
// per sample covering every player. Deterministic in (seed, samples, scheme);
// std_error is the per-player sample standard deviation / sqrt(samples).
inline ValuationVector shapley_monte_carlo(const Game& game, Scheme scheme,
                                           std::uint64_t samples, std::uint64_t seed) {
  const int n = game.player_count();
  if (samples < 2)
    throw std::invalid_argument("shapley_monte_carlo: need at least 2 samples");

  std::mt19937_64 rng(seed);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);

  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int k = n - 1; k > 0; --k) {  // Fisher-Yates, deterministic draws
      const int j = static_cast<int>(detail::uniform_below(rng, static_cast<std::uint64_t>(k) + 1));
      std::swap(perm[k], perm[j]);
    }
    CoalitionMask predecessors = 0;
    for (int i : perm) {
      const double d = marginal(game, scheme, i, predecessors);
      sum[i] += d;
      sum_sq[i] += d * d;
      predecessors |= player_bit(i);
    }
  }

  ValuationVector out;
  out.scheme = scheme;
  out.method = Method::monte_carlo;
  out.samples = samples;
  out.seed = seed;
  out.phi.assign(n, 0.0);
  out.std_error.assign(n, 0.0);
  const double m = static_cast<double>(samples);
  for (int i = 0; i < n; ++i) {
    out.phi[i] = sum[i] / m;
    const double variance = std::max(0.0, (sum_sq[i] - sum[i] * sum[i] / m) / (m - 1.0));
    out.std_error[i] = std::sqrt(variance / m);
  }
  return out;
}

}  // namespace coopshap
