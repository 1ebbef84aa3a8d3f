#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "wayloc/embedding.hpp"
#include "wayloc/store.hpp"

namespace wayloc {

/// Candidate labels and squared L2 distances of one search, ascending.
struct RawSearchResult {
  std::vector<WaypointLabel> labels;
  std::vector<double> distances;
  /// Store record index of each hit.
  std::vector<std::size_t> indices;

  [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
  friend bool operator==(const RawSearchResult&, const RawSearchResult&) = default;
};

/// Exhaustive exact L2 index. Immutable after build; search() is safe to call
/// concurrently.
class FlatIndex {
 public:
  /// Throws EmptyStore, or UnnormalizedInput if any vector is not unit-norm.
  [[nodiscard]] static FlatIndex build(ReferenceStore store);

  /// The min(k, size()) nearest records by squared L2 distance, ties broken by
  /// lower record index. Throws DimensionMismatch, UnnormalizedQuery, and
  /// InvalidArgument for k == 0.
  [[nodiscard]] RawSearchResult search(const Embedding& query, std::size_t k) const;

  [[nodiscard]] std::size_t size() const noexcept { return store_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return store_.dim(); }
  [[nodiscard]] const ReferenceStore& store() const noexcept { return store_; }
  [[nodiscard]] const WaypointLabel& label(std::size_t i) const { return store_[i].label; }

 private:
  explicit FlatIndex(ReferenceStore store);

  ReferenceStore store_;
  std::vector<double> rows_;  // row-major, size() x dim()
};

/// Sidecar manifest written next to the store file: "<store path>.manifest".
[[nodiscard]] std::filesystem::path manifest_path(const std::filesystem::path& index_path);

void save_index(const FlatIndex& index, const std::filesystem::path& path);
/// Throws ManifestMissing, ManifestMismatch, plus any read_store error.
[[nodiscard]] FlatIndex load_index(const std::filesystem::path& path);

}  // namespace wayloc
