#include "wayloc/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "wayloc/error.hpp"

namespace wayloc {

void SmootherConfig::validate() const {
  if (window == 0) throw Error(Errc::InvalidConfig, "window must be >= 1");
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error(Errc::InvalidConfig, "threshold must lie in (0, 1)");
}

const WaypointLabel& majority_latest_wins(std::span<const WaypointLabel> votes) {
  if (votes.empty()) throw Error(Errc::InvalidArgument, "majority of an empty vote");
  struct Tally {
    std::size_t count = 0;
    std::size_t last = 0;
  };
  std::unordered_map<std::string, Tally> tally;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    auto& t = tally[votes[i].str()];
    ++t.count;
    t.last = i;
  }
  std::size_t best = 0;
  std::size_t best_count = 0;
  for (const auto& [label, t] : tally) {
    if (t.count > best_count || (t.count == best_count && t.last > best)) {
      best_count = t.count;
      best = t.last;
    }
  }
  return votes[best];
}

TemporalSmoother::TemporalSmoother(SmootherConfig cfg) : cfg_(cfg) { cfg_.validate(); }

std::optional<WaypointLabel> TemporalSmoother::push(const Candidate& top) {
  if (!(top.confidence > cfg_.threshold)) return std::nullopt;
  if (window_.size() == cfg_.window) window_.pop_front();
  window_.push_back(top.label);
  ++admitted_;
  const std::vector<WaypointLabel> votes(window_.begin(), window_.end());
  return majority_latest_wins(votes);
}

SessionPrediction finalize(std::span<const WaypointLabel> smoothed_outputs) {
  if (smoothed_outputs.empty()) {
    throw Error(Errc::NoConfidentPrediction, "no frame cleared the confidence threshold");
  }
  const auto& winner = majority_latest_wins(smoothed_outputs);
  const auto votes = static_cast<std::size_t>(std::count(smoothed_outputs.begin(), smoothed_outputs.end(), winner));
  return {winner, static_cast<double>(votes) / static_cast<double>(smoothed_outputs.size()),
          smoothed_outputs.size()};
}

SessionPrediction finalize(const SessionRecord& record) { return finalize(record.smoothed_outputs); }

}  // namespace wayloc
