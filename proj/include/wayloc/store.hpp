#pragma once

// Embedding store file, all integers little-endian, no padding:
//
//   magic "WPES" | version u16 (=1) | flags u8 (bit0 = normalized) | reserved u8 (=0)
//   dim u32 | record-count u32
//   per record: label-length u16 | label bytes | dim x float32
//
// Query streams use the same layout with frame indexes as labels.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wayloc/embedding.hpp"

namespace wayloc {

inline constexpr std::uint16_t kStoreVersion = 1;
inline constexpr std::size_t kStoreHeaderBytes = 16;
/// A vector read from a file flagged normalized may deviate this far from
/// unit norm before the file is rejected.
inline constexpr double kStoredNormTolerance = 1e-4;

struct StoreRecord {
  WaypointLabel label;
  Embedding embedding;

  friend bool operator==(const StoreRecord&, const StoreRecord&) = default;
};

/// Ordered (label, embedding) records of one dimension. Immutable once shared.
class ReferenceStore {
 public:
  explicit ReferenceStore(std::size_t dim = kDefaultDim, bool normalized = true);

  /// Throws DimensionMismatch, or UnnormalizedInput when the embedding's
  /// normalized flag disagrees with the store's.
  void add(WaypointLabel label, Embedding embedding);

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] bool normalized() const noexcept { return normalized_; }
  [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
  [[nodiscard]] bool empty() const noexcept { return records_.empty(); }
  [[nodiscard]] const std::vector<StoreRecord>& records() const noexcept { return records_; }
  [[nodiscard]] const StoreRecord& operator[](std::size_t i) const { return records_[i]; }

  /// Distinct labels in order of first appearance.
  [[nodiscard]] std::vector<WaypointLabel> distinct_labels() const;

  friend bool operator==(const ReferenceStore&, const ReferenceStore&) = default;

 private:
  std::size_t dim_;
  bool normalized_;
  std::vector<StoreRecord> records_;
};

[[nodiscard]] std::vector<std::uint8_t> encode_store(const ReferenceStore& store);
[[nodiscard]] ReferenceStore decode_store(std::span<const std::uint8_t> bytes);

/// Returns the number of bytes written. Serialization is deterministic.
std::size_t write_store(const ReferenceStore& store, const std::filesystem::path& path);
[[nodiscard]] ReferenceStore read_store(const std::filesystem::path& path);

/// Rounds every value through float32, i.e. what a write/read cycle yields.
[[nodiscard]] ReferenceStore quantize_to_storage(const ReferenceStore& store);

}  // namespace wayloc
