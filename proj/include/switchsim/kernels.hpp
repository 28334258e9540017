#pragma once
// Data-parallel inner loops: counter-based Bernoulli/binomial sampling and
// line-sum reductions over n x n count grids.
//
// Every kernel has a portable scalar reference and, where the target has it,
// an AVX2 variant. The active table is chosen once at startup from the CPU
// feature bits; SWITCHSIM_KERNELS=scalar forces the reference path.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace switchsim::kernels {

/// 32-bit murmur3 finalizer.
constexpr std::uint32_t fmix32(std::uint32_t x) noexcept {
  x ^= x >> 16;
  x *= 0x85ebca6bu;
  x ^= x >> 13;
  x *= 0xc2b2ae35u;
  x ^= x >> 16;
  return x;
}

/// Uniform 32-bit word for (key, counter). A bijection in counter for a fixed key.
constexpr std::uint32_t counter_hash(std::uint64_t key, std::uint32_t counter) noexcept {
  std::uint32_t x = static_cast<std::uint32_t>(key) ^ (counter * 0x9e3779b9u);
  x = fmix32(x);
  x ^= static_cast<std::uint32_t>(key >> 32);
  return fmix32(x);
}

/// Threshold t such that P(counter_hash < t) == floor(p * 2^32) / 2^32.
std::uint64_t probability_threshold(double p);

struct KernelTable {
  std::string_view name;

  /// out[c] = 1 iff counter_hash(key, first + c) < threshold.
  void (*bernoulli_fill)(std::uint64_t key, std::uint32_t first, std::uint64_t threshold,
                         std::span<std::uint8_t> out);

  /// out[c] = #{t < trials : counter_hash(key, c * trials + t) < threshold}.
  void (*binomial_fill)(std::uint64_t key, std::uint32_t trials, std::uint64_t threshold,
                        std::span<std::int64_t> out);

  /// Row and column sums of a row-major n x n grid.
  void (*line_sums)(std::span<const std::int64_t> grid, std::size_t n, std::span<std::int64_t> rows,
                    std::span<std::int64_t> cols);

  std::int64_t (*total)(std::span<const std::int64_t> values);
};

const KernelTable& scalar_kernels() noexcept;

/// AVX2 table when compiled in and supported by the running CPU.
std::optional<KernelTable> avx2_kernels() noexcept;

/// Table picked at first use.
const KernelTable& active() noexcept;

}  // namespace switchsim::kernels
