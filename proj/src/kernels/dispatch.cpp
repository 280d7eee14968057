#include <cstdlib>
#include <string_view>

#include "swflow/kernels.hpp"

namespace swflow {

#if defined(SWFLOW_HAVE_AVX2_TU)
namespace detail {
const KernelTable& avx2_table();
}
#endif

const KernelTable* avx2_kernels() {
#if defined(SWFLOW_HAVE_AVX2_TU)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("SWFLOW_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const auto* avx = avx2_kernels()) return *avx;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace swflow
