#pragma once

#include <cstdint>

#include "adint/attack_graph.hpp"

namespace adint {

inline constexpr std::uint64_t kOracleSubsetGuard = 10'000'000;

// Number of subsets of size <= k drawn from `pool` items (approximate for
// huge values; only compared against the guard).
inline double bounded_subset_count(std::uint64_t pool, std::uint64_t k) {
  double total = 0.0;
  double term = 1.0;  // C(pool, i)
  for (std::uint64_t i = 0; i <= k && i <= pool; ++i) {
    total += term;
    term = term * static_cast<double>(pool - i) / static_cast<double>(i + 1);
  }
  return total;
}

// Exhaustive minimizer over every block set of size <= b. Subsets are
// visited in lexicographic order and only strict improvements replace the
// incumbent, so ties resolve to the lexicographically smallest set.
inline Solution brute_force(const AttackGraph& g, std::size_t budget,
                            const SuccessFunction& f = {},
                            std::uint64_t guard = kOracleSubsetGuard) {
  const std::vector<EdgeId> pool = g.blockable_edges();
  const std::size_t k = std::min(budget, pool.size());
  if (bounded_subset_count(pool.size(), k) > static_cast<double>(guard))
    throw TooLarge("oracle would enumerate more than " + std::to_string(guard) + " subsets");

  std::vector<char> mask(g.edge_count(), 0);
  std::vector<EdgeId> chosen;
  Solution best{BlockSet{}, success_rate(g, distances_to_da(g, mask), f)};

  // Pre-order DFS over index combinations.
  auto visit = [&](auto&& self, std::size_t start) -> void {
    if (chosen.size() == k) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      mask[pool[i]] = 1;
      chosen.push_back(pool[i]);
      const double rate = success_rate(g, distances_to_da(g, mask), f);
      if (rate < best.rate - kRateTieEps) best = {BlockSet(chosen), rate};
      self(self, i + 1);
      chosen.pop_back();
      mask[pool[i]] = 0;
    }
  };
  visit(visit, 0);
  return best;
}

}  // namespace adint
