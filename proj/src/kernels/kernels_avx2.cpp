// Compiled with -mavx2; only reached through the dispatch table after a CPU check.
#include "kernels_impl.hpp"

#include <immintrin.h>

namespace switchsim::kernels::avx2 {

namespace {

inline __m256i fmix32(__m256i x) {
  x = _mm256_xor_si256(x, _mm256_srli_epi32(x, 16));
  x = _mm256_mullo_epi32(x, _mm256_set1_epi32(static_cast<int>(0x85ebca6bu)));
  x = _mm256_xor_si256(x, _mm256_srli_epi32(x, 13));
  x = _mm256_mullo_epi32(x, _mm256_set1_epi32(static_cast<int>(0xc2b2ae35u)));
  return _mm256_xor_si256(x, _mm256_srli_epi32(x, 16));
}

struct HashKey {
  __m256i lo;
  __m256i hi;
  explicit HashKey(std::uint64_t key)
      : lo(_mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(key)))),
        hi(_mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(key >> 32)))) {}
};

inline __m256i counter_hash(const HashKey& k, __m256i counters) {
  __m256i x = _mm256_mullo_epi32(counters, _mm256_set1_epi32(static_cast<int>(0x9e3779b9u)));
  x = fmix32(_mm256_xor_si256(x, k.lo));
  return fmix32(_mm256_xor_si256(x, k.hi));
}

// Lane mask of (h < threshold) as unsigned 32-bit compare; threshold < 2^32.
inline __m256i below(__m256i h, __m256i biased_threshold) {
  const __m256i bias = _mm256_set1_epi32(static_cast<int>(0x80000000u));
  return _mm256_cmpgt_epi32(biased_threshold, _mm256_xor_si256(h, bias));
}

inline __m256i biased(std::uint64_t threshold) {
  return _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(threshold) ^ 0x80000000u));
}

}  // namespace

void bernoulli_fill(std::uint64_t key, std::uint32_t first, std::uint64_t threshold,
                    std::span<std::uint8_t> out) {
  if (threshold == 0 || threshold >= (std::uint64_t{1} << 32)) {
    const auto v = static_cast<std::uint8_t>(threshold != 0);
    for (auto& o : out) o = v;
    return;
  }
  const HashKey k(key);
  const __m256i thr = biased(threshold);
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  std::size_t c = 0;
  for (; c + 8 <= out.size(); c += 8) {
    const __m256i ctr =
        _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(first + static_cast<std::uint32_t>(c))), lane);
    const int bits = _mm256_movemask_ps(_mm256_castsi256_ps(below(counter_hash(k, ctr), thr)));
    for (int l = 0; l < 8; ++l) out[c + l] = static_cast<std::uint8_t>((bits >> l) & 1);
  }
  for (; c < out.size(); ++c)
    out[c] = static_cast<std::uint8_t>(
        kernels::counter_hash(key, first + static_cast<std::uint32_t>(c)) < threshold);
}

void binomial_fill(std::uint64_t key, std::uint32_t trials, std::uint64_t threshold,
                   std::span<std::int64_t> out) {
  if (threshold == 0 || threshold >= (std::uint64_t{1} << 32) || trials == 0) {
    const std::int64_t v = threshold == 0 ? 0 : trials;
    for (auto& o : out) o = v;
    return;
  }
  const HashKey k(key);
  const __m256i thr = biased(threshold);
  const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  const __m256i stride = _mm256_mullo_epi32(lane, _mm256_set1_epi32(static_cast<int>(trials)));
  alignas(32) std::int32_t hits[8];
  std::size_t c = 0;
  for (; c + 8 <= out.size(); c += 8) {
    const __m256i base = _mm256_add_epi32(
        _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(c) * trials)), stride);
    __m256i acc = _mm256_setzero_si256();
    for (std::uint32_t t = 0; t < trials; ++t) {
      const __m256i ctr = _mm256_add_epi32(base, _mm256_set1_epi32(static_cast<int>(t)));
      acc = _mm256_sub_epi32(acc, below(counter_hash(k, ctr), thr));
    }
    _mm256_store_si256(reinterpret_cast<__m256i*>(hits), acc);
    for (int l = 0; l < 8; ++l) out[c + l] = hits[l];
  }
  for (; c < out.size(); ++c) {
    const auto base = static_cast<std::uint32_t>(c) * trials;
    std::int64_t h = 0;
    for (std::uint32_t t = 0; t < trials; ++t) h += kernels::counter_hash(key, base + t) < threshold;
    out[c] = h;
  }
}

void line_sums(std::span<const std::int64_t> grid, std::size_t n, std::span<std::int64_t> rows,
               std::span<std::int64_t> cols) {
  for (std::size_t j = 0; j < n; ++j) cols[j] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t* row = grid.data() + i * n;
    __m256i racc = _mm256_setzero_si256();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + j));
      racc = _mm256_add_epi64(racc, v);
      auto* cp = reinterpret_cast<__m256i*>(cols.data() + j);
      _mm256_storeu_si256(cp, _mm256_add_epi64(_mm256_loadu_si256(cp), v));
    }
    alignas(32) std::int64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), racc);
    std::int64_t r = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; j < n; ++j) {
      r += row[j];
      cols[j] += row[j];
    }
    rows[i] = r;
  }
}

std::int64_t total(std::span<const std::int64_t> values) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= values.size(); i += 4)
    acc = _mm256_add_epi64(acc, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(values.data() + i)));
  alignas(32) std::int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::int64_t s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < values.size(); ++i) s += values[i];
  return s;
}

}  // namespace switchsim::kernels::avx2
