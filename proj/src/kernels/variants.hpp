#pragma once

#include "wayloc/kernels.hpp"

namespace wayloc::kernels::detail {

const KernelSet& scalar_set() noexcept;
#if defined(WAYLOC_HAVE_AVX2)
const KernelSet& avx2_set() noexcept;
#endif
#if defined(WAYLOC_HAVE_NEON)
const KernelSet& neon_set() noexcept;
#endif

}  // namespace wayloc::kernels::detail
