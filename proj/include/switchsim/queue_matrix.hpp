#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "switchsim/errors.hpp"

namespace switchsim {

/// Square grid of non-negative counts. Read either as per-cell queue sizes or
/// as the biadjacency matrix of a bipartite multigraph (inputs x outputs).
class QueueMatrix {
 public:
  QueueMatrix() = default;
  explicit QueueMatrix(std::size_t n) : n_(n), cells_(n * n, 0) {}
  /// Row-major values; throws ParameterError if not square or any entry is negative.
  QueueMatrix(std::size_t n, std::vector<Count> cells);
  QueueMatrix(std::initializer_list<std::initializer_list<Count>> rows);

  static QueueMatrix filled(std::size_t n, Count value);
  static QueueMatrix diagonal(std::initializer_list<Count> values);

  std::size_t size() const noexcept { return n_; }
  Count operator()(std::size_t i, std::size_t j) const noexcept { return cells_[i * n_ + j]; }
  Count& operator()(std::size_t i, std::size_t j) noexcept { return cells_[i * n_ + j]; }

  std::span<const Count> cells() const noexcept { return cells_; }
  std::span<Count> cells() noexcept { return cells_; }

  std::vector<Count> row_sums() const;
  std::vector<Count> col_sums() const;
  /// Largest line sum; the minimum number of schedules that can clear the matrix.
  Count clearance_time() const;
  Count total() const;
  bool is_zero() const { return total() == 0; }

  /// True when every row and column sums to the same value.
  bool is_regular() const;
  /// Element-wise a <= b.
  bool dominated_by(const QueueMatrix& other) const;

  friend bool operator==(const QueueMatrix&, const QueueMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Count> cells_;
};

}  // namespace switchsim
