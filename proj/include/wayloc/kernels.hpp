#pragma once

// Distance kernels over double-precision rows.
//
// Every variant computes the same quantities; only the summation order
// differs (lane-parallel partial sums), so results agree with the scalar
// reference to a few ulps. The active variant is chosen once per process:
// WAYLOC_KERNEL=scalar|avx2|neon forces one, otherwise the widest variant the
// CPU supports wins.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace wayloc::kernels {

struct KernelSet {
  std::string_view name;
  /// sum_i (a_i - b_i)^2
  double (*l2_sq)(const double* a, const double* b, std::size_t n) noexcept;
  /// sum_i a_i * b_i
  double (*dot)(const double* a, const double* b, std::size_t n) noexcept;
  /// out[r] = l2_sq(query, rows + r * dim, dim) for r in [0, count)
  void (*l2_sq_rows)(const double* query, const double* rows, std::size_t count, std::size_t dim,
                     double* out) noexcept;
};

[[nodiscard]] const KernelSet& scalar() noexcept;
/// nullptr when not compiled in or the CPU lacks AVX2+FMA.
[[nodiscard]] const KernelSet* avx2() noexcept;
/// nullptr when not compiled in.
[[nodiscard]] const KernelSet* neon() noexcept;

/// Variants usable on this machine, scalar first.
[[nodiscard]] std::vector<const KernelSet*> available() noexcept;

/// The process-wide selection.
[[nodiscard]] const KernelSet& active();

/// Looks a variant up by name; nullptr if unknown or unavailable.
[[nodiscard]] const KernelSet* find(std::string_view name) noexcept;

inline double l2_sq(std::span<const double> a, std::span<const double> b) {
  return active().l2_sq(a.data(), b.data(), a.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

}  // namespace wayloc::kernels
