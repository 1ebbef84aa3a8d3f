#include "wayloc/pipeline.hpp"

#include <ostream>

#include "wayloc/error.hpp"

namespace wayloc {

void PipelineConfig::validate() const {
  scoring.validate();
  smoothing.validate();
  if (stride == 0) throw Error(Errc::InvalidConfig, "stride must be >= 1");
}

SessionRecord run_session(const FlatIndex& index, const ReferenceStore& stream, const PipelineConfig& cfg,
                          const FrameSink& sink) {
  cfg.validate();
  if (stream.dim() != index.dim()) {
    throw Error(Errc::DimensionMismatch, "stream dim " + std::to_string(stream.dim()) + " != index dim " +
                                             std::to_string(index.dim()));
  }
  TemporalSmoother smoother(cfg.smoothing);
  SessionRecord record;
  for (std::size_t i = 0; i < stream.size(); i += cfg.stride) {
    FrameTrace frame;
    frame.frame = i;
    frame.candidates = rank_frame(index.search(stream[i].embedding, cfg.scoring.k), cfg.scoring);
    if (!frame.candidates.empty()) {
      const std::size_t before = smoother.admitted_count();
      frame.smoothed = smoother.push(frame.candidates.front());
      frame.admitted = smoother.admitted_count() != before;
    }
    if (frame.smoothed) record.smoothed_outputs.push_back(*frame.smoothed);
    if (sink) sink(frame);
    record.frames.push_back(std::move(frame));
  }
  return record;
}

QueryOutcome run_query(const FlatIndex& index, const ReferenceStore& stream, const PipelineConfig& cfg,
                       const FrameSink& sink) {
  auto record = run_session(index, stream, cfg, sink);
  auto prediction = finalize(record);
  return {std::move(prediction), std::move(record)};
}

nlohmann::json to_json(const FrameTrace& frame) {
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& c : frame.candidates) {
    candidates.push_back({{"label", c.label.str()}, {"distance", c.distance}, {"confidence", c.confidence}});
  }
  nlohmann::json j = {{"frame", frame.frame}, {"candidates", std::move(candidates)}, {"admitted", frame.admitted}};
  j["smoothed"] = frame.smoothed ? nlohmann::json(frame.smoothed->str()) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const SessionPrediction& prediction) {
  return {{"label", prediction.label.str()},
          {"vote_fraction", prediction.vote_fraction},
          {"total_votes", prediction.total_votes}};
}

void write_jsonl(std::ostream& out, const FrameTrace& frame) { out << to_json(frame).dump() << '\n'; }

}  // namespace wayloc
