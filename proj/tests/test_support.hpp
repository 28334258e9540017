#pragma once
// Random instances shared by the unit and acceptance tests.

#include <bit>
#include <cstdint>
#include <random>

#include "switchsim/queue_matrix.hpp"
#include "switchsim/schedule.hpp"

namespace switchsim::testing {

inline QueueMatrix random_matrix(std::mt19937_64& rng, std::size_t n, Count max_entry) {
  std::uniform_int_distribution<Count> pick(0, max_entry);
  QueueMatrix q(n);
  for (auto& c : q.cells()) c = pick(rng);
  return q;
}

/// Element-wise sum of a matching sequence.
inline QueueMatrix sum_of(const MatchingSequence& seq, std::size_t n) {
  QueueMatrix total(n);
  for (const auto& s : seq)
    for (const auto& [i, j] : s.pairs()) total(i, j) += 1;
  return total;
}

/// Brute-force min cut of the envelope network over all row/column subsets.
inline Count subset_min_cut(const QueueMatrix& q, Count beta) {
  const std::size_t n = q.size();
  Count best = -1;
  for (std::uint32_t rm = 0; rm < (1u << n); ++rm) {
    for (std::uint32_t cm = 0; cm < (1u << n); ++cm) {
      Count inside = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if ((rm >> i & 1u) && (cm >> j & 1u)) inside += q(i, j);
      const auto r = static_cast<Count>(std::popcount(rm));
      const auto c = static_cast<Count>(std::popcount(cm));
      const Count cut = beta * (static_cast<Count>(n) - r) + beta * (static_cast<Count>(n) - c) + inside;
      if (best < 0 || cut < best) best = cut;
    }
  }
  return best;
}

}  // namespace switchsim::testing
