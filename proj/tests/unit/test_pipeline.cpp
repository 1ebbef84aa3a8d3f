#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "wayloc/error.hpp"
#include "wayloc/pipeline.hpp"
#include "wayloc/simulator.hpp"

using namespace wayloc;

namespace {

EnvConfig calibrated() { return load_env_config(testkit::source_dir() / "configs" / "corridor9.json"); }

}  // namespace

TEST(Pipeline, PerfectReplay) {
  std::mt19937_64 rng(30);
  const auto refs = testkit::random_store(rng, 32, 20, 5);
  const auto idx = FlatIndex::build(refs);
  ReferenceStore stream(32, true);
  for (int f = 0; f < 30; ++f) stream.add(WaypointLabel(std::to_string(f)), refs[7].embedding);
  const auto out = run_query(idx, stream, {});
  EXPECT_EQ(out.prediction.label, refs[7].label);
  EXPECT_EQ(out.prediction.vote_fraction, 1.0);
  EXPECT_EQ(out.prediction.total_votes, 30u);
  EXPECT_EQ(out.record.frames.size(), 30u);
}

TEST(Pipeline, FullyGatedSessionHasNoPrediction) {
  std::mt19937_64 rng(31);
  const auto refs = testkit::random_store(rng, 32, 20, 5);
  const auto idx = FlatIndex::build(refs);
  ReferenceStore stream(32, true);
  for (int f = 0; f < 30; ++f) stream.add(WaypointLabel(std::to_string(f)), testkit::random_embedding(rng, 32));
  const auto record = run_session(idx, stream, {});
  EXPECT_TRUE(record.smoothed_outputs.empty());
  for (const auto& fr : record.frames) EXPECT_FALSE(fr.admitted);
  try {
    (void)run_query(idx, stream, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoConfidentPrediction);
  }
}

TEST(Pipeline, MatchesCompositionOracleOnCalibratedStream) {
  const SyntheticEnvironment env(calibrated());
  const auto refs = reference_store(env);
  const auto idx = FlatIndex::build(refs);
  for (std::size_t w = 0; w < env.waypoint_count(); ++w) {
    for (std::size_t stride : {1u, 3u}) {
      const auto stream = simulate(env, env.labels()[w], 1.0, 100 + w);
      PipelineConfig cfg;
      cfg.stride = stride;
      const auto record = run_session(idx, stream, cfg);
      const auto want = testkit::composition_oracle(refs, stream, 5, 2.5, 10, 0.7, stride);
      ASSERT_EQ(record.frames.size(), want.size());
      for (std::size_t f = 0; f < want.size(); ++f) {
        const auto& got = record.frames[f];
        EXPECT_EQ(got.frame, f * stride);
        ASSERT_EQ(got.candidates.size(), want[f].candidates.size());
        for (std::size_t c = 0; c < want[f].candidates.size(); ++c) {
          ASSERT_EQ(got.candidates[c].label.str(), want[f].candidates[c].first);
          ASSERT_NEAR(got.candidates[c].confidence, want[f].candidates[c].second, 1e-9);
        }
        ASSERT_EQ(got.admitted, want[f].admitted);
        ASSERT_EQ(got.smoothed.has_value(), want[f].smoothed.has_value());
        if (got.smoothed) ASSERT_EQ(got.smoothed->str(), *want[f].smoothed);
      }
    }
  }
}

TEST(Pipeline, DimensionMismatchAndConfig) {
  std::mt19937_64 rng(32);
  const auto idx = FlatIndex::build(testkit::random_store(rng, 16, 4));
  EXPECT_THROW((void)run_session(idx, testkit::random_store(rng, 8, 4), {}), Error);
  PipelineConfig cfg;
  cfg.stride = 0;
  EXPECT_THROW((void)run_session(idx, testkit::random_store(rng, 16, 4), cfg), Error);
}

TEST(Pipeline, SinkSeesEveryFrameAndJsonShape) {
  std::mt19937_64 rng(33);
  const auto refs = testkit::random_store(rng, 16, 6, 3);
  const auto idx = FlatIndex::build(refs);
  ReferenceStore stream(16, true);
  for (int f = 0; f < 5; ++f) stream.add(WaypointLabel(std::to_string(f)), refs[f % 2].embedding);
  std::ostringstream lines;
  std::size_t seen = 0;
  (void)run_session(idx, stream, {}, [&](const FrameTrace& t) {
    ++seen;
    write_jsonl(lines, t);
  });
  EXPECT_EQ(seen, 5u);
  std::istringstream in(lines.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("frame").get<std::size_t>(), n++);
    EXPECT_TRUE(j.at("admitted").get<bool>());
    EXPECT_TRUE(j.at("smoothed").is_string());
    EXPECT_EQ(j.at("candidates")[0].at("confidence").get<double>(), 1.0);
  }
  EXPECT_EQ(n, 5u);
}
