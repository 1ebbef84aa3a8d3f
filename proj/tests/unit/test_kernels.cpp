#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wayloc/kernels.hpp"

using namespace wayloc;

TEST(Kernels, ScalarIsAlwaysAvailableAndFirst) {
  const auto all = kernels::available();
  ASSERT_FALSE(all.empty());
  EXPECT_EQ(all.front()->name, "scalar");
  EXPECT_EQ(kernels::find("scalar"), &kernels::scalar());
  EXPECT_EQ(kernels::find("nope"), nullptr);
}

TEST(Kernels, ScalarMatchesLongDoubleOracle) {
  std::mt19937_64 rng(3);
  for (std::size_t dim = 1; dim < 70; ++dim) {
    const auto a = testkit::random_vector(rng, dim);
    const auto b = testkit::random_vector(rng, dim);
    long double d2 = 0, dp = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      d2 += static_cast<long double>(a[i] - b[i]) * (a[i] - b[i]);
      dp += static_cast<long double>(a[i]) * b[i];
    }
    EXPECT_NEAR(kernels::scalar().l2_sq(a.data(), b.data(), dim), static_cast<double>(d2), 1e-12 * (1 + d2));
    EXPECT_NEAR(kernels::scalar().dot(a.data(), b.data(), dim), static_cast<double>(dp), 1e-12 * dim);
  }
}

TEST(Kernels, EveryVariantAgreesWithScalar) {
  std::mt19937_64 rng(11);
  const auto& ref = kernels::scalar();
  for (const auto* k : kernels::available()) {
    SCOPED_TRACE(std::string(k->name));
    for (std::size_t dim : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 63u, 129u, 2048u}) {
      const auto a = testkit::random_unit(rng, dim);
      const auto b = testkit::random_unit(rng, dim);
      ASSERT_NEAR(k->l2_sq(a.data(), b.data(), dim), ref.l2_sq(a.data(), b.data(), dim), 1e-12);
      ASSERT_NEAR(k->dot(a.data(), b.data(), dim), ref.dot(a.data(), b.data(), dim), 1e-12);

      const std::size_t rows = 13;
      std::vector<double> block;
      for (std::size_t r = 0; r < rows; ++r) {
        const auto v = testkit::random_unit(rng, dim);
        block.insert(block.end(), v.begin(), v.end());
      }
      std::vector<double> got(rows), want(rows);
      k->l2_sq_rows(a.data(), block.data(), rows, dim, got.data());
      ref.l2_sq_rows(a.data(), block.data(), rows, dim, want.data());
      for (std::size_t r = 0; r < rows; ++r) ASSERT_NEAR(got[r], want[r], 1e-12);
    }
  }
}

TEST(Kernels, ActiveIsOneOfTheAvailable) {
  const auto& act = kernels::active();
  bool found = false;
  for (const auto* k : kernels::available()) found = found || k == &act;
  EXPECT_TRUE(found);
}
