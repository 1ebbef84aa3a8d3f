#include "variants.hpp"

namespace wayloc::kernels::detail {

namespace {

double l2_sq(const double* a, const double* b, std::size_t n) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double dot(const double* a, const double* b, std::size_t n) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void l2_sq_rows(const double* query, const double* rows, std::size_t count, std::size_t dim,
                double* out) noexcept {
  for (std::size_t r = 0; r < count; ++r) out[r] = l2_sq(query, rows + r * dim, dim);
}

}  // namespace

const KernelSet& scalar_set() noexcept {
  static const KernelSet set{"scalar", &l2_sq, &dot, &l2_sq_rows};
  return set;
}

}  // namespace wayloc::kernels::detail
