#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wayloc {

inline constexpr std::size_t kDefaultDim = 2048;
/// Norms at or below this are treated as the zero vector.
inline constexpr double kZeroNormTolerance = 1e-12;
/// Allowed deviation of ||v|| from 1 for a vector flagged normalized.
inline constexpr double kUnitNormTolerance = 1e-6;

/// Fixed-dimension feature vector. Values are held in double precision in
/// memory; the on-disk store format narrows them to float32.
class Embedding {
 public:
  Embedding() = default;

  /// Wraps values as-is. Throws NonFiniteInput / InvalidArgument on bad data
  /// and UnnormalizedInput when `normalized` is claimed but the norm is off.
  explicit Embedding(std::vector<double> values, bool normalized = false);

  [[nodiscard]] std::size_t dim() const noexcept { return values_.size(); }
  [[nodiscard]] bool normalized() const noexcept { return normalized_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double norm() const noexcept;

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::vector<double> values_;
  bool normalized_ = false;
};

/// v / ||v||, computed in double precision.
/// Throws DegenerateVector when ||v|| <= 1e-12, NonFiniteInput on NaN/Inf.
[[nodiscard]] Embedding normalize(std::span<const double> v);
[[nodiscard]] Embedding normalize(const Embedding& v);

/// Non-empty label of at most 65535 UTF-8 bytes (the store format limit).
class WaypointLabel {
 public:
  static constexpr std::size_t kMaxBytes = 65535;

  WaypointLabel() = default;
  /// Throws InvalidArgument on an empty label and FormatOverflow past kMaxBytes.
  explicit WaypointLabel(std::string id);

  [[nodiscard]] const std::string& str() const noexcept { return id_; }

  friend auto operator<=>(const WaypointLabel&, const WaypointLabel&) = default;

 private:
  std::string id_;
};

}  // namespace wayloc
