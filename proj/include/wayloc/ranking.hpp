#pragma once

#include <cstddef>
#include <vector>

#include "wayloc/embedding.hpp"
#include "wayloc/flat_index.hpp"

namespace wayloc {

inline constexpr double kDefaultSigma = 2.5;
inline constexpr std::size_t kDefaultK = 5;

struct ScoringConfig {
  double sigma = kDefaultSigma;  ///< decay scale of the confidence law
  std::size_t k = kDefaultK;     ///< neighbours fetched, and unique labels kept

  /// Throws InvalidSigma / InvalidArgument.
  void validate() const;
};

struct LabelDistance {
  WaypointLabel label;
  double distance_sq = 0.0;

  friend bool operator==(const LabelDistance&, const LabelDistance&) = default;
};

/// One ranked waypoint hypothesis for a frame.
struct Candidate {
  WaypointLabel label;
  double distance = 0.0;    ///< root L2 distance to the closest record of this label
  double confidence = 0.0;  ///< exp(-distance / sigma)

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct Score {
  double distance = 0.0;
  double confidence = 0.0;
};

/// Keeps the smallest distance per label, ascending, at most k entries. Equal
/// distances keep first-appearance order. Throws LengthMismatch.
[[nodiscard]] std::vector<LabelDistance> top_k_unique(const RawSearchResult& raw, std::size_t k);

/// distance = sqrt(distance_sq), confidence = exp(-distance / sigma).
/// Throws NegativeDistance, InvalidSigma.
[[nodiscard]] Score score(double distance_sq, const ScoringConfig& cfg);

/// top_k_unique followed by score on each entry.
[[nodiscard]] std::vector<Candidate> rank_frame(const RawSearchResult& raw, const ScoringConfig& cfg);

}  // namespace wayloc
