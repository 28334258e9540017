#include "switchsim/schedule.hpp"

#include <algorithm>

#include "switchsim/errors.hpp"

namespace switchsim {

Schedule Schedule::from_pairs(std::size_t n, const std::vector<Pair>& pairs) {
  Schedule s(n);
  for (auto [i, j] : pairs) {
    if (i >= n || j >= n) throw ParameterError("schedule pair out of range");
    s.set(i, j);
  }
  return s;
}

Schedule Schedule::from_permutation(const std::vector<int>& perm) {
  Schedule s(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] >= 0) s.set(i, static_cast<std::size_t>(perm[i]));
  return s;
}

Schedule Schedule::identity(std::size_t n) {
  Schedule s(n);
  for (std::size_t i = 0; i < n; ++i) s.set(i, i);
  return s;
}

bool Schedule::is_feasible() const {
  std::vector<int> col(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    int row = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!marks_[i * n_ + j]) continue;
      if (++row > 1 || ++col[j] > 1) return false;
    }
  }
  return true;
}

bool Schedule::is_full_matching() const { return is_feasible() && count() == n_; }

bool Schedule::empty() const {
  return std::none_of(marks_.begin(), marks_.end(), [](std::uint8_t m) { return m != 0; });
}

std::size_t Schedule::count() const {
  return static_cast<std::size_t>(std::count(marks_.begin(), marks_.end(), std::uint8_t{1}));
}

std::vector<Schedule::Pair> Schedule::pairs() const {
  std::vector<Pair> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (marks_[i * n_ + j]) out.emplace_back(i, j);
  return out;
}

}  // namespace switchsim
