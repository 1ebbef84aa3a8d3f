#include <cstdlib>
#include <string>

#include "variants.hpp"
#include "wayloc/error.hpp"

namespace wayloc::kernels {

const KernelSet& scalar() noexcept { return detail::scalar_set(); }

const KernelSet* avx2() noexcept {
#if defined(WAYLOC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &detail::avx2_set() : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet* neon() noexcept {
#if defined(WAYLOC_HAVE_NEON)
  return &detail::neon_set();
#else
  return nullptr;
#endif
}

std::vector<const KernelSet*> available() noexcept {
  std::vector<const KernelSet*> out{&scalar()};
  if (const auto* k = avx2()) out.push_back(k);
  if (const auto* k = neon()) out.push_back(k);
  return out;
}

const KernelSet* find(std::string_view name) noexcept {
  for (const auto* k : available()) {
    if (k->name == name) return k;
  }
  return nullptr;
}

namespace {

const KernelSet& select() {
  if (const char* forced = std::getenv("WAYLOC_KERNEL"); forced != nullptr && *forced != '\0') {
    const std::string_view name(forced);
    if (name != "auto") {
      if (const auto* k = find(name)) return *k;
      throw Error(Errc::InvalidConfig, "WAYLOC_KERNEL=" + std::string(name) + " is not available here");
    }
  }
  return *available().back();
}

}  // namespace

const KernelSet& active() {
  static const KernelSet& chosen = select();
  return chosen;
}

}  // namespace wayloc::kernels
