#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>

#include "json.hpp"

#include "wayloc/flat_index.hpp"
#include "wayloc/ranking.hpp"
#include "wayloc/smoothing.hpp"
#include "wayloc/store.hpp"

namespace wayloc {

struct PipelineConfig {
  ScoringConfig scoring;
  SmootherConfig smoothing;
  std::size_t stride = 1;  ///< process every stride-th frame of the stream

  void validate() const;
};

struct QueryOutcome {
  SessionPrediction prediction;
  SessionRecord record;
};

using FrameSink = std::function<void(const FrameTrace&)>;

/// search -> rank_frame -> smoother for every stride-th frame of `stream`,
/// with a fresh smoother. `sink` sees each frame as it is processed.
/// Throws DimensionMismatch when the stream and index dims differ.
[[nodiscard]] SessionRecord run_session(const FlatIndex& index, const ReferenceStore& stream,
                                        const PipelineConfig& cfg, const FrameSink& sink = {});

/// run_session followed by finalize. NoConfidentPrediction propagates.
[[nodiscard]] QueryOutcome run_query(const FlatIndex& index, const ReferenceStore& stream,
                                     const PipelineConfig& cfg, const FrameSink& sink = {});

/// {"frame", "candidates": [{"label","distance","confidence"}], "admitted", "smoothed"}
[[nodiscard]] nlohmann::json to_json(const FrameTrace& frame);
[[nodiscard]] nlohmann::json to_json(const SessionPrediction& prediction);

/// Writes one compact JSON object per line.
void write_jsonl(std::ostream& out, const FrameTrace& frame);

}  // namespace wayloc
