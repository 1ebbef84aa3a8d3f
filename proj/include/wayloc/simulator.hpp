#pragma once

// Desk-scale stand-in for a corridor of camera waypoints.
//
// Each waypoint owns a unit prototype vector. Prototypes share a common
// "corridor" component, so neighbouring places look alike. A simulated frame
// at waypoint w is
//
//   normalize(p_w + noise * g_t / sqrt(dim) + |m_t| * (p_n - p_w))
//
// where g_t is i.i.d. standard normal and m_t = noise * drift_gain *
// (pan_span / 180) * h_t pulls the view toward the neighbouring waypoint p_n
// (the sign of h_t picks which neighbour). h_t is a unit-variance AR(1)
// process with correlation time drift_correlation_seconds, so consecutive
// frames drift together the way a panning camera does. Wider pans drift
// further.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "json.hpp"
#include "wayloc/embedding.hpp"
#include "wayloc/store.hpp"

namespace wayloc {

struct EnvConfig {
  std::size_t waypoints = 9;
  std::size_t dim = kDefaultDim;
  std::size_t fps = 30;
  double prototype_similarity = 0.5;  ///< cosine between any two prototypes, in [0, 1)
  std::size_t refs_per_waypoint = 12;
  double reference_noise = 0.1;
  double noise_level = 0.1;
  double drift_gain = 3.0;
  double drift_correlation_seconds = 0.25;
  int pan_span = 180;  ///< degrees, one of 45, 90, 180, 360
  std::uint64_t seed = 1;

  /// Throws InvalidConfig.
  void validate() const;
};

[[nodiscard]] EnvConfig env_config_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const EnvConfig& cfg);
[[nodiscard]] EnvConfig load_env_config(const std::filesystem::path& path);

/// Labels "A".."Z" for up to 26 waypoints, "W1".."Wn" beyond.
[[nodiscard]] std::vector<WaypointLabel> waypoint_labels(std::size_t count);

class SyntheticEnvironment {
 public:
  explicit SyntheticEnvironment(EnvConfig cfg);

  [[nodiscard]] const EnvConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] std::size_t waypoint_count() const noexcept { return labels_.size(); }
  [[nodiscard]] const std::vector<WaypointLabel>& labels() const noexcept { return labels_; }
  [[nodiscard]] const std::vector<Embedding>& prototypes() const noexcept { return prototypes_; }

  /// Index of `label`; throws UnknownWaypoint.
  [[nodiscard]] std::size_t waypoint_index(const WaypointLabel& label) const;

  /// Same prototypes, different pan span or noise.
  [[nodiscard]] SyntheticEnvironment with_pan_span(int degrees) const;
  [[nodiscard]] SyntheticEnvironment with_noise(double noise_level) const;

 private:
  SyntheticEnvironment(EnvConfig cfg, std::vector<WaypointLabel> labels, std::vector<Embedding> prototypes);

  EnvConfig cfg_;
  std::vector<WaypointLabel> labels_;
  std::vector<Embedding> prototypes_;
};

/// refs_per_waypoint noisy views of each prototype, grouped by waypoint.
[[nodiscard]] ReferenceStore reference_store(const SyntheticEnvironment& env);

/// A query stream of round(seconds * fps / stride) frames at `waypoint`,
/// labelled by frame index. Deterministic in `seed`. Throws UnknownWaypoint.
[[nodiscard]] ReferenceStore simulate(const SyntheticEnvironment& env, const WaypointLabel& waypoint,
                                      double seconds, std::uint64_t seed, std::size_t stride = 1);

/// Mixes a base seed with trial coordinates into an independent stream seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                        std::uint64_t c = 0) noexcept;

}  // namespace wayloc
