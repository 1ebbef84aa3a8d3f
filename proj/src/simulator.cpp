#include "wayloc/simulator.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "wayloc/error.hpp"

namespace wayloc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> gaussian(std::mt19937_64& rng, std::size_t n, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng) * scale;
  return v;
}

}  // namespace

void EnvConfig::validate() const {
  const auto fail = [](const std::string& what) { throw Error(Errc::InvalidConfig, what); };
  if (waypoints == 0) fail("waypoints must be >= 1");
  if (dim == 0) fail("dim must be >= 1");
  if (fps == 0) fail("fps must be >= 1");
  if (!(prototype_similarity >= 0.0 && prototype_similarity < 1.0)) fail("prototype_similarity must lie in [0, 1)");
  if (refs_per_waypoint == 0) fail("refs_per_waypoint must be >= 1");
  if (!(reference_noise >= 0.0) || !std::isfinite(reference_noise)) fail("reference_noise must be >= 0");
  if (!(noise_level >= 0.0) || !std::isfinite(noise_level)) fail("noise_level must be >= 0");
  if (!(drift_gain >= 0.0) || !std::isfinite(drift_gain)) fail("drift_gain must be >= 0");
  if (!(drift_correlation_seconds > 0.0)) fail("drift_correlation_seconds must be > 0");
  if (pan_span != 45 && pan_span != 90 && pan_span != 180 && pan_span != 360) {
    fail("pan_span must be one of 45, 90, 180, 360");
  }
}

EnvConfig env_config_from_json(const nlohmann::json& j) {
  EnvConfig c;
  try {
    c.waypoints = j.value("waypoints", c.waypoints);
    c.dim = j.value("dim", c.dim);
    c.fps = j.value("fps", c.fps);
    c.prototype_similarity = j.value("prototype_similarity", c.prototype_similarity);
    c.refs_per_waypoint = j.value("refs_per_waypoint", c.refs_per_waypoint);
    c.reference_noise = j.value("reference_noise", c.reference_noise);
    c.noise_level = j.value("noise_level", c.noise_level);
    c.drift_gain = j.value("drift_gain", c.drift_gain);
    c.drift_correlation_seconds = j.value("drift_correlation_seconds", c.drift_correlation_seconds);
    c.pan_span = j.value("pan_span", c.pan_span);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const EnvConfig& c) {
  return {{"waypoints", c.waypoints},
          {"dim", c.dim},
          {"fps", c.fps},
          {"prototype_similarity", c.prototype_similarity},
          {"refs_per_waypoint", c.refs_per_waypoint},
          {"reference_noise", c.reference_noise},
          {"noise_level", c.noise_level},
          {"drift_gain", c.drift_gain},
          {"drift_correlation_seconds", c.drift_correlation_seconds},
          {"pan_span", c.pan_span},
          {"seed", c.seed}};
}

EnvConfig load_env_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
  return env_config_from_json(j);
}

std::vector<WaypointLabel> waypoint_labels(std::size_t count) {
  std::vector<WaypointLabel> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.emplace_back(count <= 26 ? std::string(1, static_cast<char>('A' + i)) : "W" + std::to_string(i + 1));
  }
  return out;
}

SyntheticEnvironment::SyntheticEnvironment(EnvConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  labels_ = waypoint_labels(cfg_.waypoints);

  std::mt19937_64 rng(derive_seed(cfg_.seed, 0x70726f74));
  const double unit = 1.0 / std::sqrt(static_cast<double>(cfg_.dim));
  const auto shared = gaussian(rng, cfg_.dim, unit);
  const double ws = std::sqrt(cfg_.prototype_similarity);
  const double wu = std::sqrt(1.0 - cfg_.prototype_similarity);
  for (std::size_t w = 0; w < cfg_.waypoints; ++w) {
    auto own = gaussian(rng, cfg_.dim, unit);
    for (std::size_t i = 0; i < cfg_.dim; ++i) own[i] = ws * shared[i] + wu * own[i];
    prototypes_.push_back(normalize(own));
  }
  for (std::size_t a = 0; a < prototypes_.size(); ++a) {
    for (std::size_t b = a + 1; b < prototypes_.size(); ++b) {
      if (prototypes_[a] == prototypes_[b]) throw Error(Errc::InvalidConfig, "prototypes collide");
    }
  }
}

SyntheticEnvironment::SyntheticEnvironment(EnvConfig cfg, std::vector<WaypointLabel> labels,
                                           std::vector<Embedding> prototypes)
    : cfg_(cfg), labels_(std::move(labels)), prototypes_(std::move(prototypes)) {
  cfg_.validate();
}

std::size_t SyntheticEnvironment::waypoint_index(const WaypointLabel& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw Error(Errc::UnknownWaypoint, "no waypoint '" + label.str() + "' in this environment");
}

SyntheticEnvironment SyntheticEnvironment::with_pan_span(int degrees) const {
  auto cfg = cfg_;
  cfg.pan_span = degrees;
  return SyntheticEnvironment(cfg, labels_, prototypes_);
}

SyntheticEnvironment SyntheticEnvironment::with_noise(double noise_level) const {
  auto cfg = cfg_;
  cfg.noise_level = noise_level;
  return SyntheticEnvironment(cfg, labels_, prototypes_);
}

ReferenceStore reference_store(const SyntheticEnvironment& env) {
  const auto& cfg = env.config();
  ReferenceStore store(cfg.dim, true);
  std::mt19937_64 rng(derive_seed(cfg.seed, 0x72656673));
  const double scale = cfg.reference_noise / std::sqrt(static_cast<double>(cfg.dim));
  for (std::size_t w = 0; w < env.waypoint_count(); ++w) {
    const auto p = env.prototypes()[w].values();
    for (std::size_t r = 0; r < cfg.refs_per_waypoint; ++r) {
      if (cfg.reference_noise == 0.0) {
        store.add(env.labels()[w], env.prototypes()[w]);
        continue;
      }
      auto v = gaussian(rng, cfg.dim, scale);
      for (std::size_t i = 0; i < cfg.dim; ++i) v[i] += p[i];
      store.add(env.labels()[w], normalize(v));
    }
  }
  return store;
}

ReferenceStore simulate(const SyntheticEnvironment& env, const WaypointLabel& waypoint, double seconds,
                        std::uint64_t seed, std::size_t stride) {
  const auto& cfg = env.config();
  const std::size_t w = env.waypoint_index(waypoint);
  if (!(seconds >= 0.0) || !std::isfinite(seconds)) throw Error(Errc::InvalidArgument, "seconds must be >= 0");
  if (stride == 0) throw Error(Errc::InvalidArgument, "stride must be >= 1");

  const auto frames = static_cast<std::size_t>(
      std::llround(seconds * static_cast<double>(cfg.fps) / static_cast<double>(stride)));
  ReferenceStore stream(cfg.dim, true);
  const auto& proto = env.prototypes()[w];
  if (cfg.noise_level == 0.0) {
    for (std::size_t t = 0; t < frames; ++t) stream.add(WaypointLabel(std::to_string(t)), proto);
    return stream;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double dt = static_cast<double>(stride) / static_cast<double>(cfg.fps);
  const double rho = std::exp(-dt / cfg.drift_correlation_seconds);
  const double innovation = std::sqrt(1.0 - rho * rho);
  const double drift_scale = cfg.noise_level * cfg.drift_gain * (cfg.pan_span / 180.0);
  const double iso_scale = cfg.noise_level / std::sqrt(static_cast<double>(cfg.dim));
  const std::size_t last = env.waypoint_count() - 1;

  const auto p = proto.values();
  double heading = normal(rng);
  std::vector<double> v(cfg.dim);
  for (std::size_t t = 0; t < frames; ++t) {
    if (t > 0) heading = rho * heading + innovation * normal(rng);
    const double m = drift_scale * heading;
    for (std::size_t i = 0; i < cfg.dim; ++i) v[i] = p[i] + iso_scale * normal(rng);
    if (last > 0 && m != 0.0) {
      std::size_t n = 0;
      if (w == 0) n = 1;
      else if (w == last) n = last - 1;
      else n = m > 0.0 ? w + 1 : w - 1;
      const auto q = env.prototypes()[n].values();
      const double a = std::abs(m);
      for (std::size_t i = 0; i < cfg.dim; ++i) v[i] += a * (q[i] - p[i]);
    }
    stream.add(WaypointLabel(std::to_string(t)), normalize(v));
  }
  return stream;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  std::uint64_t s = splitmix64(base);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  return splitmix64(s ^ c);
}

}  // namespace wayloc
