#include "wayloc/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "wayloc/error.hpp"

namespace wayloc {

void ScoringConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(Errc::InvalidSigma, "sigma must be a positive finite number");
  }
  if (k == 0) throw Error(Errc::InvalidArgument, "k must be >= 1");
}

std::vector<LabelDistance> top_k_unique(const RawSearchResult& raw, std::size_t k) {
  if (raw.labels.size() != raw.distances.size()) {
    throw Error(Errc::LengthMismatch, "labels and distances differ in length");
  }
  std::vector<LabelDistance> unique;
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < raw.labels.size(); ++i) {
    const auto [it, inserted] = slot.try_emplace(raw.labels[i].str(), unique.size());
    if (inserted) {
      unique.push_back({raw.labels[i], raw.distances[i]});
    } else {
      auto& best = unique[it->second].distance_sq;
      best = std::min(best, raw.distances[i]);
    }
  }
  // Stable sort keeps first-appearance order among equal distances.
  std::stable_sort(unique.begin(), unique.end(),
                   [](const LabelDistance& a, const LabelDistance& b) { return a.distance_sq < b.distance_sq; });
  if (unique.size() > k) unique.resize(k);
  return unique;
}

Score score(double distance_sq, const ScoringConfig& cfg) {
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma)) {
    throw Error(Errc::InvalidSigma, "sigma must be a positive finite number");
  }
  if (std::isnan(distance_sq) || distance_sq < 0.0) {
    throw Error(Errc::NegativeDistance, "squared distance must be >= 0");
  }
  const double d = std::sqrt(distance_sq);
  return {d, std::exp(-d / cfg.sigma)};
}

std::vector<Candidate> rank_frame(const RawSearchResult& raw, const ScoringConfig& cfg) {
  cfg.validate();
  const auto unique = top_k_unique(raw, cfg.k);
  std::vector<Candidate> out;
  out.reserve(unique.size());
  for (const auto& u : unique) {
    const auto s = score(u.distance_sq, cfg);
    out.push_back({u.label, s.distance, s.confidence});
  }
  return out;
}

}  // namespace wayloc
