#include "kernels_impl.hpp"

#include <cstdlib>
#include <string_view>

namespace switchsim::kernels {

std::optional<KernelTable> avx2_kernels() noexcept {
#if defined(SWITCHSIM_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2"))
    return KernelTable{"avx2", avx2::bernoulli_fill, avx2::binomial_fill, avx2::line_sums,
                       avx2::total};
#endif
  return std::nullopt;
}

namespace {

KernelTable select() noexcept {
  if (const char* forced = std::getenv("SWITCHSIM_KERNELS");
      forced != nullptr && std::string_view(forced) == "scalar")
    return scalar_kernels();
  if (auto t = avx2_kernels()) return *t;
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable table = select();
  return table;
}

}  // namespace switchsim::kernels
