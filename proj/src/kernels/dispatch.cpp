#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace volrank::kernels {
namespace {

#define VOLRANK_TABLE(ns, label) \
  KernelTable{label, ns::dot, ns::sq_dist, ns::gram2, ns::axpy, ns::scale, ns::rotate, ns::hadamard}

const KernelTable kScalar = VOLRANK_TABLE(scalar, "scalar");

#if defined(VOLRANK_HAVE_AVX2)
const KernelTable kAvx2 = VOLRANK_TABLE(avx2, "avx2");
#endif

#if defined(VOLRANK_HAVE_NEON)
const KernelTable kNeon = VOLRANK_TABLE(neon, "neon");
#endif

const KernelTable& select() noexcept {
  if (const char* forced = std::getenv("VOLRANK_SIMD")) {
    if (std::string_view(forced) == "scalar") return kScalar;
  }
  if (const KernelTable* t = avx2_table()) return *t;
  if (const KernelTable* t = neon_table()) return *t;
  return kScalar;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(VOLRANK_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() noexcept {
#if defined(VOLRANK_HAVE_NEON)
  return &kNeon;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace volrank::kernels
