#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace switchsim {

/// One slot's 0/1 service matrix. Feasible when every row and column has at
/// most one marked cell; a full matching marks exactly one per line.
class Schedule {
 public:
  using Pair = std::pair<std::size_t, std::size_t>;

  Schedule() = default;
  explicit Schedule(std::size_t n) : n_(n), marks_(n * n, 0) {}

  static Schedule from_pairs(std::size_t n, const std::vector<Pair>& pairs);
  /// Marks (i, perm[i]) for every i with perm[i] >= 0.
  static Schedule from_permutation(const std::vector<int>& perm);
  static Schedule identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t i, std::size_t j) const noexcept { return marks_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool on = true) noexcept {
    marks_[i * n_ + j] = static_cast<std::uint8_t>(on);
  }

  bool is_feasible() const;
  bool is_full_matching() const;
  bool empty() const;
  std::size_t count() const;
  /// Marked cells in row-major order.
  std::vector<Pair> pairs() const;

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> marks_;
};

/// Slot-ordered schedules.
using MatchingSequence = std::vector<Schedule>;

}  // namespace switchsim
