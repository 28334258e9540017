#include "kernels_impl.hpp"

#include <cmath>

namespace switchsim::kernels {

std::uint64_t probability_threshold(double p) {
  if (!(p >= 0.0)) return 0;
  if (p >= 1.0) return std::uint64_t{1} << 32;
  return static_cast<std::uint64_t>(std::floor(std::ldexp(p, 32)));
}

namespace scalar {

void bernoulli_fill(std::uint64_t key, std::uint32_t first, std::uint64_t threshold,
                    std::span<std::uint8_t> out) {
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto h = counter_hash(key, first + static_cast<std::uint32_t>(c));
    out[c] = static_cast<std::uint8_t>(h < threshold);
  }
}

void binomial_fill(std::uint64_t key, std::uint32_t trials, std::uint64_t threshold,
                   std::span<std::int64_t> out) {
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto base = static_cast<std::uint32_t>(c) * trials;
    std::int64_t hits = 0;
    for (std::uint32_t t = 0; t < trials; ++t) hits += counter_hash(key, base + t) < threshold;
    out[c] = hits;
  }
}

void line_sums(std::span<const std::int64_t> grid, std::size_t n, std::span<std::int64_t> rows,
               std::span<std::int64_t> cols) {
  for (std::size_t j = 0; j < n; ++j) cols[j] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t r = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = grid[i * n + j];
      r += v;
      cols[j] += v;
    }
    rows[i] = r;
  }
}

std::int64_t total(std::span<const std::int64_t> values) {
  std::int64_t s = 0;
  for (auto v : values) s += v;
  return s;
}

}  // namespace scalar

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar", scalar::bernoulli_fill, scalar::binomial_fill,
                                 scalar::line_sums, scalar::total};
  return table;
}

}  // namespace switchsim::kernels
