#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "wayloc/ranking.hpp"

namespace wayloc {

inline constexpr std::size_t kDefaultWindow = 10;
inline constexpr double kDefaultThreshold = 0.7;

struct SmootherConfig {
  std::size_t window = kDefaultWindow;  ///< M, capacity of the admission window
  double threshold = kDefaultThreshold;  ///< tau; admission requires confidence > tau

  /// Throws InvalidConfig unless window >= 1 and 0 < threshold < 1.
  void validate() const;

  friend bool operator==(const SmootherConfig&, const SmootherConfig&) = default;
};

/// Majority label of `votes`; ties go to the tied label that occurs latest.
/// `votes` must be non-empty.
[[nodiscard]] const WaypointLabel& majority_latest_wins(std::span<const WaypointLabel> votes);

/// Sliding-window smoother over rank-1 candidates of consecutive frames.
class TemporalSmoother {
 public:
  explicit TemporalSmoother(SmootherConfig cfg = {});

  /// Admits `top` when its confidence exceeds the threshold, evicting the
  /// oldest entry at capacity, and returns the window's majority label.
  /// Below-threshold frames leave the state untouched and return nullopt.
  std::optional<WaypointLabel> push(const Candidate& top);

  [[nodiscard]] const std::deque<WaypointLabel>& window() const noexcept { return window_; }
  [[nodiscard]] std::size_t admitted_count() const noexcept { return admitted_; }
  [[nodiscard]] const SmootherConfig& config() const noexcept { return cfg_; }

  friend bool operator==(const TemporalSmoother&, const TemporalSmoother&) = default;

 private:
  SmootherConfig cfg_;
  std::deque<WaypointLabel> window_;
  std::size_t admitted_ = 0;
};

struct FrameTrace {
  std::size_t frame = 0;
  std::vector<Candidate> candidates;
  bool admitted = false;
  std::optional<WaypointLabel> smoothed;

  friend bool operator==(const FrameTrace&, const FrameTrace&) = default;
};

/// Everything one query session produced.
struct SessionRecord {
  std::vector<WaypointLabel> smoothed_outputs;
  std::vector<FrameTrace> frames;

  friend bool operator==(const SessionRecord&, const SessionRecord&) = default;
};

struct SessionPrediction {
  WaypointLabel label;
  double vote_fraction = 0.0;
  std::size_t total_votes = 0;

  friend bool operator==(const SessionPrediction&, const SessionPrediction&) = default;
};

/// Final vote over the session's smoothed outputs. Throws NoConfidentPrediction
/// when no frame ever cleared the threshold.
[[nodiscard]] SessionPrediction finalize(const SessionRecord& record);
[[nodiscard]] SessionPrediction finalize(std::span<const WaypointLabel> smoothed_outputs);

}  // namespace wayloc
