#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "wayloc/error.hpp"
#include "wayloc/store.hpp"

using namespace wayloc;

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void dump(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Errc decode_error(const std::vector<std::uint8_t>& bytes) {
  try {
    (void)decode_store(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return Errc::InvalidArgument;
}

ReferenceStore three_records() {
  ReferenceStore s(4, true);
  s.add(WaypointLabel("C"), Embedding({1, 0, 0, 0}, true));
  s.add(WaypointLabel("A"), Embedding({0, 1, 0, 0}, true));
  s.add(WaypointLabel("B"), Embedding({0, 0, 0.6, 0.8}, true));
  return quantize_to_storage(s);
}

}  // namespace

TEST(StoreFormat, EmptyStoreIsHeaderOnly) {
  const auto dir = testkit::scratch_dir("store_empty");
  const ReferenceStore empty(2048, true);
  EXPECT_EQ(write_store(empty, dir / "e.wpes"), kStoreHeaderBytes);
  const auto bytes = slurp(dir / "e.wpes");
  const std::vector<std::uint8_t> expected{'W', 'P', 'E', 'S', 1, 0, 1, 0, 0x00, 0x08, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(bytes, expected);
  EXPECT_EQ(read_store(dir / "e.wpes"), empty);
}

TEST(StoreFormat, RecordLayoutIsLittleEndianFloat32) {
  ReferenceStore s(2, true);
  s.add(WaypointLabel("AB"), Embedding({0.6, 0.8}, true));
  const auto bytes = encode_store(s);
  ASSERT_EQ(bytes.size(), 16u + 2 + 2 + 2 * 4);
  EXPECT_EQ(bytes[12], 1);  // record count
  EXPECT_EQ(bytes[16], 2);
  EXPECT_EQ(bytes[17], 0);
  EXPECT_EQ(bytes[18], 'A');
  EXPECT_EQ(bytes[19], 'B');
  float f0 = 0, f1 = 0;
  std::memcpy(&f0, &bytes[20], 4);
  std::memcpy(&f1, &bytes[24], 4);
  EXPECT_EQ(f0, 0.6f);
  EXPECT_EQ(f1, 0.8f);
}

TEST(StoreFormat, ThreeRecordFixtureKeepsOrder) {
  const auto dir = testkit::scratch_dir("store_three");
  const auto s = three_records();
  (void)write_store(s, dir / "t.wpes");
  const auto back = read_store(dir / "t.wpes");
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[0].label.str(), "C");
  EXPECT_EQ(back[1].label.str(), "A");
  EXPECT_EQ(back[2].label.str(), "B");
  EXPECT_EQ(back, s);
}

TEST(StoreFormat, WrongMagic) {
  auto bytes = encode_store(three_records());
  bytes[0] = 'X';
  EXPECT_EQ(decode_error(bytes), Errc::BadMagic);
}

TEST(StoreFormat, TruncatedMidRecord) {
  auto bytes = encode_store(three_records());
  bytes.resize(bytes.size() - 3);
  EXPECT_EQ(decode_error(bytes), Errc::TruncatedFile);
  bytes.resize(10);
  EXPECT_EQ(decode_error(bytes), Errc::TruncatedFile);
}

TEST(StoreFormat, HeaderFieldsValidated) {
  auto bytes = encode_store(three_records());
  auto v = bytes;
  v[4] = 2;
  EXPECT_EQ(decode_error(v), Errc::UnsupportedVersion);
  v = bytes;
  v[7] = 1;
  EXPECT_EQ(decode_error(v), Errc::UnsupportedVersion);
  v = bytes;
  v.push_back(0);
  EXPECT_EQ(decode_error(v), Errc::InvalidArgument);
}

TEST(StoreFormat, NormalizedFlagEnforcedOnRead) {
  auto bytes = encode_store(three_records());
  const float bad = 0.5f;
  std::memcpy(&bytes[16 + 2 + 1], &bad, 4);  // first value of record 0
  EXPECT_EQ(decode_error(bytes), Errc::NormViolation);

  const float nan = std::nanf("");
  auto v = encode_store(three_records());
  std::memcpy(&v[16 + 2 + 1], &nan, 4);
  EXPECT_EQ(decode_error(v), Errc::NonFiniteInput);
}

TEST(StoreFormat, UnnormalizedStoreRoundTrips) {
  ReferenceStore s(3, false);
  s.add(WaypointLabel("raw"), Embedding({1.5, -2.0, 7.25}));
  const auto back = decode_store(encode_store(s));
  EXPECT_FALSE(back.normalized());
  EXPECT_EQ(back, s);
}

TEST(ReferenceStore, AddChecksDimAndFlag) {
  ReferenceStore s(4, true);
  EXPECT_THROW(s.add(WaypointLabel("A"), Embedding({1, 0, 0}, true)), Error);
  EXPECT_THROW(s.add(WaypointLabel("A"), Embedding({2, 0, 0, 0})), Error);
}

TEST(StoreProperty, RoundTripAndByteIdentity) {
  const auto dir = testkit::scratch_dir("store_prop");
  std::mt19937_64 rng(77);
  const std::size_t dims[] = {1, 4, 7, 33, 2048};
  for (int c = 0; c < 40; ++c) {
    const std::size_t dim = dims[c % 5];
    const std::size_t n = c % 7 == 0 ? 0 : rng() % 12;
    const auto s = testkit::random_store(rng, dim, n);
    const auto a = dir / "a.wpes";
    const auto b = dir / "b.wpes";
    (void)write_store(s, a);
    (void)write_store(s, b);
    ASSERT_EQ(slurp(a), slurp(b));
    ASSERT_EQ(read_store(a), s);
  }
}

TEST(StoreIo, MissingFile) {
  EXPECT_THROW((void)read_store("/nonexistent/dir/x.wpes"), Error);
}
