#include "wayloc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "wayloc/error.hpp"

namespace wayloc {

ConfidenceTrace confidence_trace(const FlatIndex& index, const ReferenceStore& stream, const WaypointLabel& truth,
                                 const PipelineConfig& cfg) {
  cfg.validate();
  const auto labels = index.store().distinct_labels();
  if (std::find(labels.begin(), labels.end(), truth) == labels.end()) {
    throw Error(Errc::UnknownWaypoint, "index has no records for '" + truth.str() + "'");
  }
  if (stream.dim() != index.dim()) {
    throw Error(Errc::DimensionMismatch, "stream dim " + std::to_string(stream.dim()) + " != index dim " +
                                             std::to_string(index.dim()));
  }

  ConfidenceTrace out;
  out.truth = truth;
  for (std::size_t i = 0; i < stream.size(); i += cfg.stride) {
    // The full ranking: its first k entries are exactly search(q, k).
    const auto raw = index.search(stream[i].embedding, index.size());
    RawSearchResult head;
    const std::size_t k = std::min(cfg.scoring.k, raw.size());
    head.labels.assign(raw.labels.begin(), raw.labels.begin() + static_cast<std::ptrdiff_t>(k));
    head.distances.assign(raw.distances.begin(), raw.distances.begin() + static_cast<std::ptrdiff_t>(k));
    const auto ranked = rank_frame(head, cfg.scoring);

    const auto hit = std::find(raw.labels.begin(), raw.labels.end(), truth);
    const auto pos = static_cast<std::size_t>(hit - raw.labels.begin());
    out.confidence.push_back(score(raw.distances[pos], cfg.scoring).confidence);
    out.truth_is_top.push_back(!ranked.empty() && ranked.front().label == truth);
  }

  const std::size_t n = out.confidence.size();
  if (n > 0) {
    out.mean = std::accumulate(out.confidence.begin(), out.confidence.end(), 0.0) / static_cast<double>(n);
    const std::size_t seen = std::max<std::size_t>(1, (4 * n + 4) / 5);  // ceil(4n/5)
    out.four_fifths_frame = seen - 1;
    out.at_four_fifths = out.confidence[out.four_fifths_frame];
    out.mean_first_four_fifths =
        std::accumulate(out.confidence.begin(), out.confidence.begin() + static_cast<std::ptrdiff_t>(seen), 0.0) /
        static_cast<double>(seen);
  }
  return out;
}

EvalPlan short_query_plan(std::uint64_t seed) { return {5, 1.0, {180}, seed, true}; }

EvalPlan viewpoint_plan(std::uint64_t seed) { return {10, 3.0, {45, 90, 180}, seed, true}; }

TrialRecord run_trial(const SyntheticEnvironment& env, const FlatIndex& index, std::size_t waypoint, int pan_span,
                      std::size_t trial, const EvalPlan& plan, const PipelineConfig& cfg) {
  const auto view = env.with_pan_span(pan_span);
  const auto& truth = env.labels().at(waypoint);

  TrialRecord rec;
  rec.truth = truth;
  rec.pan_span = pan_span;
  rec.trial = trial;
  rec.seed = derive_seed(plan.seed, waypoint, static_cast<std::uint64_t>(pan_span), trial);

  const auto stream = simulate(view, truth, plan.seconds, rec.seed);
  const auto session = run_session(index, stream, cfg);
  if (!session.smoothed_outputs.empty()) {
    const auto prediction = finalize(session);
    rec.prediction = prediction.label;
    rec.vote_fraction = prediction.vote_fraction;
    rec.correct = prediction.label == truth;
  }
  if (plan.measure_confidence && !stream.empty()) {
    rec.mean_true_confidence = confidence_trace(index, stream, truth, cfg).mean;
  }
  return rec;
}

TrialReport summarize(const SyntheticEnvironment& env, std::vector<TrialRecord> trials) {
  TrialReport report;
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_label;
  std::map<int, std::pair<std::size_t, std::size_t>> by_span;
  double confidence_sum = 0.0;
  for (const auto& t : trials) {
    auto& l = by_label[t.truth.str()];
    auto& s = by_span[t.pan_span];
    l.second++;
    s.second++;
    if (t.correct) {
      l.first++;
      s.first++;
      report.correct++;
    }
    report.total++;
    confidence_sum += t.mean_true_confidence;
  }
  for (const auto& label : env.labels()) {
    const auto it = by_label.find(label.str());
    if (it == by_label.end()) continue;
    report.per_waypoint.emplace_back(label, static_cast<double>(it->second.first) / it->second.second);
  }
  for (const auto& [span, counts] : by_span) {
    report.per_span.emplace_back(span, static_cast<double>(counts.first) / counts.second);
  }
  if (report.total > 0) {
    report.overall = static_cast<double>(report.correct) / static_cast<double>(report.total);
    report.mean_true_confidence = confidence_sum / static_cast<double>(report.total);
  }
  report.trials = std::move(trials);
  return report;
}

TrialReport eval_accuracy(const SyntheticEnvironment& env, const FlatIndex& index, const EvalPlan& plan,
                          const PipelineConfig& cfg) {
  if (plan.trials_per_waypoint == 0) throw Error(Errc::InvalidArgument, "trials per waypoint must be >= 1");
  if (plan.pan_spans.empty()) throw Error(Errc::InvalidArgument, "at least one pan span is required");
  std::vector<TrialRecord> trials;
  trials.reserve(plan.pan_spans.size() * env.waypoint_count() * plan.trials_per_waypoint);
  for (int span : plan.pan_spans) {
    for (std::size_t w = 0; w < env.waypoint_count(); ++w) {
      for (std::size_t t = 0; t < plan.trials_per_waypoint; ++t) {
        trials.push_back(run_trial(env, index, w, span, t, plan, cfg));
      }
    }
  }
  return summarize(env, std::move(trials));
}

TrialReport eval_accuracy(const SyntheticEnvironment& env, const EvalPlan& plan, const PipelineConfig& cfg) {
  const auto index = FlatIndex::build(reference_store(env));
  return eval_accuracy(env, index, plan, cfg);
}

CalibrationResult calibrate(const SyntheticEnvironment& env, const CalibrationPlan& plan, const PipelineConfig& cfg) {
  if (!(plan.step > 0.0) || !(plan.start >= 0.0) || !(plan.stop >= plan.start)) {
    throw Error(Errc::InvalidArgument, "calibration grid needs 0 <= start <= stop and step > 0");
  }
  const auto index = FlatIndex::build(reference_store(env));
  CalibrationResult result;
  const auto steps = static_cast<std::size_t>(std::floor((plan.stop - plan.start) / plan.step + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) {
    // Round to the grid so stored values read back exactly as written.
    const double noise = std::round((plan.start + static_cast<double>(i) * plan.step) * 1e6) / 1e6;
    const auto report = eval_accuracy(env.with_noise(noise), index, plan.eval, cfg);
    result.points.push_back({noise, report.overall, report.mean_true_confidence});
    if (report.overall < plan.target_accuracy) break;
    result.chosen_noise = noise;
  }
  return result;
}

nlohmann::json to_json(const TrialReport& report) {
  nlohmann::json per_waypoint = nlohmann::json::object();
  for (const auto& [label, acc] : report.per_waypoint) per_waypoint[label.str()] = acc;
  nlohmann::json per_span = nlohmann::json::object();
  for (const auto& [span, acc] : report.per_span) per_span[std::to_string(span)] = acc;
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : report.trials) {
    trials.push_back({{"truth", t.truth.str()},
                      {"pan_span", t.pan_span},
                      {"trial", t.trial},
                      {"seed", t.seed},
                      {"prediction", t.prediction ? nlohmann::json(t.prediction->str()) : nlohmann::json(nullptr)},
                      {"vote_fraction", t.vote_fraction},
                      {"correct", t.correct},
                      {"mean_true_confidence", t.mean_true_confidence}});
  }
  return {{"overall_accuracy", report.overall},
          {"correct", report.correct},
          {"total", report.total},
          {"mean_true_confidence", report.mean_true_confidence},
          {"per_waypoint", std::move(per_waypoint)},
          {"per_span", std::move(per_span)},
          {"trials", std::move(trials)}};
}

nlohmann::json to_json(const ConfidenceTrace& trace) {
  std::vector<std::size_t> off_top;
  for (std::size_t i = 0; i < trace.truth_is_top.size(); ++i) {
    if (!trace.truth_is_top[i]) off_top.push_back(i);
  }
  return {{"truth", trace.truth.str()},
          {"frames", trace.confidence.size()},
          {"confidence", trace.confidence},
          {"mean", trace.mean},
          {"four_fifths_frame", trace.four_fifths_frame},
          {"at_four_fifths", trace.at_four_fifths},
          {"mean_first_four_fifths", trace.mean_first_four_fifths},
          {"truth_not_top_frames", off_top}};
}

nlohmann::json to_json(const CalibrationResult& result) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : result.points) {
    points.push_back({{"noise_level", p.noise_level},
                      {"accuracy", p.accuracy},
                      {"mean_true_confidence", p.mean_true_confidence}});
  }
  return {{"chosen_noise", result.chosen_noise ? nlohmann::json(*result.chosen_noise) : nlohmann::json(nullptr)},
          {"points", std::move(points)}};
}

}  // namespace wayloc
