#include "switchsim/queue_matrix.hpp"

#include <algorithm>

#include "switchsim/kernels.hpp"

namespace switchsim {

QueueMatrix::QueueMatrix(std::size_t n, std::vector<Count> cells) : n_(n), cells_(std::move(cells)) {
  if (cells_.size() != n_ * n_) throw ParameterError("queue matrix must be square");
  if (std::any_of(cells_.begin(), cells_.end(), [](Count v) { return v < 0; }))
    throw ParameterError("queue matrix entries must be non-negative");
}

QueueMatrix::QueueMatrix(std::initializer_list<std::initializer_list<Count>> rows) {
  n_ = rows.size();
  cells_.reserve(n_ * n_);
  for (const auto& r : rows) {
    if (r.size() != n_) throw ParameterError("queue matrix must be square");
    for (Count v : r) {
      if (v < 0) throw ParameterError("queue matrix entries must be non-negative");
      cells_.push_back(v);
    }
  }
}

QueueMatrix QueueMatrix::filled(std::size_t n, Count value) {
  return QueueMatrix(n, std::vector<Count>(n * n, value));
}

QueueMatrix QueueMatrix::diagonal(std::initializer_list<Count> values) {
  QueueMatrix m(values.size());
  std::size_t i = 0;
  for (Count v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

std::vector<Count> QueueMatrix::row_sums() const {
  std::vector<Count> rows(n_), cols(n_);
  kernels::active().line_sums(cells_, n_, rows, cols);
  return rows;
}

std::vector<Count> QueueMatrix::col_sums() const {
  std::vector<Count> rows(n_), cols(n_);
  kernels::active().line_sums(cells_, n_, rows, cols);
  return cols;
}

Count QueueMatrix::clearance_time() const {
  if (n_ == 0) return 0;
  std::vector<Count> rows(n_), cols(n_);
  kernels::active().line_sums(cells_, n_, rows, cols);
  return std::max(*std::max_element(rows.begin(), rows.end()),
                  *std::max_element(cols.begin(), cols.end()));
}

Count QueueMatrix::total() const { return kernels::active().total(cells_); }

bool QueueMatrix::is_regular() const {
  if (n_ == 0) return true;
  std::vector<Count> rows(n_), cols(n_);
  kernels::active().line_sums(cells_, n_, rows, cols);
  const Count target = rows[0];
  return std::all_of(rows.begin(), rows.end(), [&](Count v) { return v == target; }) &&
         std::all_of(cols.begin(), cols.end(), [&](Count v) { return v == target; });
}

bool QueueMatrix::dominated_by(const QueueMatrix& other) const {
  if (other.n_ != n_) return false;
  for (std::size_t k = 0; k < cells_.size(); ++k)
    if (cells_[k] > other.cells_[k]) return false;
  return true;
}

}  // namespace switchsim
