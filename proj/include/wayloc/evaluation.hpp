#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "wayloc/flat_index.hpp"
#include "wayloc/pipeline.hpp"
#include "wayloc/simulator.hpp"

namespace wayloc {

/// Per-frame confidence of the true waypoint over one query stream.
struct ConfidenceTrace {
  WaypointLabel truth;
  std::vector<double> confidence;  ///< one entry per processed frame
  std::vector<bool> truth_is_top;  ///< false where another label ranked first
  double mean = 0.0;
  std::size_t four_fifths_frame = 0;   ///< position in `confidence` after 4/5 of the frames
  double at_four_fifths = 0.0;         ///< confidence at that position
  double mean_first_four_fifths = 0.0;  ///< mean over the first 4/5 of the frames
};

/// Confidence of `truth` is taken from its closest record even when it falls
/// outside the top k. Throws UnknownWaypoint if no record carries `truth`.
[[nodiscard]] ConfidenceTrace confidence_trace(const FlatIndex& index, const ReferenceStore& stream,
                                               const WaypointLabel& truth, const PipelineConfig& cfg);

struct EvalPlan {
  std::size_t trials_per_waypoint = 5;
  double seconds = 1.0;
  std::vector<int> pan_spans{180};
  std::uint64_t seed = 7;
  bool measure_confidence = true;
};

/// Five 1-second trials per waypoint at the widest pan.
[[nodiscard]] EvalPlan short_query_plan(std::uint64_t seed = 7);
/// Ten 3-second trials per waypoint at each of 45, 90 and 180 degrees.
[[nodiscard]] EvalPlan viewpoint_plan(std::uint64_t seed = 11);

struct TrialRecord {
  WaypointLabel truth;
  int pan_span = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<WaypointLabel> prediction;  ///< empty when nothing cleared the threshold
  double vote_fraction = 0.0;
  bool correct = false;
  double mean_true_confidence = 0.0;  ///< 0 unless measure_confidence

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct TrialReport {
  std::vector<std::pair<WaypointLabel, double>> per_waypoint;  ///< accuracy, environment order
  std::vector<std::pair<int, double>> per_span;
  std::size_t correct = 0;
  std::size_t total = 0;
  double overall = 0.0;
  double mean_true_confidence = 0.0;
  std::vector<TrialRecord> trials;
};

/// One independent session with its own smoother state.
[[nodiscard]] TrialRecord run_trial(const SyntheticEnvironment& env, const FlatIndex& index,
                                    std::size_t waypoint, int pan_span, std::size_t trial, const EvalPlan& plan,
                                    const PipelineConfig& cfg);

/// Every (span, waypoint, trial) combination of `plan`, against an index
/// built from the environment's reference views.
[[nodiscard]] TrialReport eval_accuracy(const SyntheticEnvironment& env, const EvalPlan& plan,
                                        const PipelineConfig& cfg);
[[nodiscard]] TrialReport eval_accuracy(const SyntheticEnvironment& env, const FlatIndex& index,
                                        const EvalPlan& plan, const PipelineConfig& cfg);

/// Aggregates finished trials (correct / total, per waypoint, per span).
[[nodiscard]] TrialReport summarize(const SyntheticEnvironment& env, std::vector<TrialRecord> trials);

struct CalibrationPlan {
  double start = 0.02;
  double stop = 0.40;
  double step = 0.01;
  double target_accuracy = 0.96;
  EvalPlan eval = short_query_plan();
};

struct CalibrationPoint {
  double noise_level = 0.0;
  double accuracy = 0.0;
  double mean_true_confidence = 0.0;
};

struct CalibrationResult {
  /// Largest grid noise such that it and every smaller grid noise meet the target.
  std::optional<double> chosen_noise;
  std::vector<CalibrationPoint> points;
};

/// Sweeps noise upward and stops at the first grid point below target.
[[nodiscard]] CalibrationResult calibrate(const SyntheticEnvironment& env, const CalibrationPlan& plan,
                                          const PipelineConfig& cfg);

[[nodiscard]] nlohmann::json to_json(const TrialReport& report);
[[nodiscard]] nlohmann::json to_json(const ConfidenceTrace& trace);
[[nodiscard]] nlohmann::json to_json(const CalibrationResult& result);

}  // namespace wayloc
