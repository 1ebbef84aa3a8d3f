#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "oracles.hpp"
#include "wayloc/error.hpp"
#include "wayloc/kernels.hpp"
#include "wayloc/pipeline.hpp"
#include "wayloc/simulator.hpp"

using namespace wayloc;

namespace {

EnvConfig small(double noise) {
  EnvConfig c;
  c.dim = 256;
  c.noise_level = noise;
  return c;
}

double mean_rank1_confidence(const SyntheticEnvironment& env, const FlatIndex& idx) {
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t w = 0; w < env.waypoint_count(); ++w) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto record = run_session(idx, simulate(env, env.labels()[w], 1.0, seed), {});
      for (const auto& f : record.frames) {
        sum += f.candidates.front().confidence;
        ++n;
      }
    }
  }
  return sum / static_cast<double>(n);
}

}  // namespace

TEST(Simulator, PrototypesDistinctUnitAndLabelled) {
  const SyntheticEnvironment env(small(0.1));
  ASSERT_EQ(env.waypoint_count(), 9u);
  EXPECT_EQ(env.labels().front().str(), "A");
  EXPECT_EQ(env.labels().back().str(), "I");
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_NEAR(env.prototypes()[i].norm(), 1.0, 1e-12);
    for (std::size_t j = i + 1; j < 9; ++j) {
      EXPECT_NEAR(kernels::dot(env.prototypes()[i].values(), env.prototypes()[j].values()), 0.5, 0.15);
    }
  }
  EXPECT_EQ(waypoint_labels(30)[29].str(), "W30");
  EXPECT_THROW((void)env.waypoint_index(WaypointLabel("Z")), Error);
}

TEST(Simulator, NoiselessStreamIsThePrototype) {
  auto cfg = small(0.0);
  cfg.reference_noise = 0.0;
  const SyntheticEnvironment env(cfg);
  const auto idx = FlatIndex::build(reference_store(env));
  const auto stream = simulate(env, WaypointLabel("E"), 1.0, 4);
  ASSERT_EQ(stream.size(), 30u);
  for (std::size_t f = 0; f < stream.size(); ++f) {
    EXPECT_EQ(stream[f].label.str(), std::to_string(f));
    EXPECT_EQ(stream[f].embedding, env.prototypes()[4]);
  }
  const auto record = run_session(idx, stream, {});
  for (const auto& f : record.frames) EXPECT_EQ(f.candidates.front().confidence, 1.0);
}

TEST(Simulator, DeterministicPerSeed) {
  const SyntheticEnvironment env(small(0.2));
  EXPECT_EQ(simulate(env, WaypointLabel("C"), 2.0, 9), simulate(env, WaypointLabel("C"), 2.0, 9));
  EXPECT_FALSE(simulate(env, WaypointLabel("C"), 2.0, 9) == simulate(env, WaypointLabel("C"), 2.0, 10));
  EXPECT_EQ(SyntheticEnvironment(small(0.2)).prototypes(), env.prototypes());
}

TEST(Simulator, FrameCountHonoursStride) {
  const SyntheticEnvironment env(small(0.1));
  EXPECT_EQ(simulate(env, WaypointLabel("A"), 3.0, 1).size(), 90u);
  EXPECT_EQ(simulate(env, WaypointLabel("A"), 3.0, 1, 3).size(), 30u);
  EXPECT_EQ(simulate(env, WaypointLabel("A"), 1.0, 1, 2).size(), 15u);
}

TEST(Simulator, ConfidenceFallsAsNoiseRises) {
  double previous = 2.0;
  for (double noise : {0.1, 0.3, 0.6}) {
    const SyntheticEnvironment env(small(noise));
    const auto idx = FlatIndex::build(reference_store(env));
    const double m = mean_rank1_confidence(env, idx);
    EXPECT_LT(m, previous) << "noise " << noise;
    previous = m;
  }
}

TEST(Simulator, DeriveSeedSpreads) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 9; ++a)
    for (std::uint64_t b = 0; b < 4; ++b)
      for (std::uint64_t c = 0; c < 10; ++c) seen.insert(derive_seed(7, a, b, c));
  EXPECT_EQ(seen.size(), 360u);
  EXPECT_EQ(derive_seed(7, 1, 2, 3), derive_seed(7, 1, 2, 3));
}

TEST(EnvConfig, JsonRoundTripAndValidation) {
  auto cfg = small(0.17);
  cfg.pan_span = 90;
  EXPECT_EQ(to_json(env_config_from_json(to_json(cfg))), to_json(cfg));
  EXPECT_EQ(env_config_from_json(nlohmann::json::object()).waypoints, 9u);

  cfg.pan_span = 60;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = small(-0.1);
  EXPECT_THROW(cfg.validate(), Error);

  const auto dir = testkit::scratch_dir("envcfg");
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW((void)load_env_config(dir / "bad.json"), std::exception);
}

TEST(EnvConfig, ShippedConfigIsCalibrated) {
  const auto cfg = load_env_config(testkit::source_dir() / "configs" / "corridor9.json");
  EXPECT_EQ(cfg.waypoints, 9u);
  EXPECT_EQ(cfg.dim, 2048u);
  EXPECT_GT(cfg.noise_level, 0.0);
}
