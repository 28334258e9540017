#pragma once

#include "switchsim/kernels.hpp"

namespace switchsim::kernels {

#if defined(SWITCHSIM_HAVE_AVX2)
namespace avx2 {
void bernoulli_fill(std::uint64_t key, std::uint32_t first, std::uint64_t threshold,
                    std::span<std::uint8_t> out);
void binomial_fill(std::uint64_t key, std::uint32_t trials, std::uint64_t threshold,
                   std::span<std::int64_t> out);
void line_sums(std::span<const std::int64_t> grid, std::size_t n, std::span<std::int64_t> rows,
               std::span<std::int64_t> cols);
std::int64_t total(std::span<const std::int64_t> values);
}  // namespace avx2
#endif

}  // namespace switchsim::kernels
