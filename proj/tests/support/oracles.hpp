#pragma once

// Test-only reference computations. Nothing here calls into the library's
// search, ranking or smoothing code; only the plain data types are shared.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wayloc/embedding.hpp"
#include "wayloc/store.hpp"

namespace wayloc::testkit {

inline std::filesystem::path source_dir() { return WAYLOC_SOURCE_DIR; }

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("wayloc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> v(dim);
  for (auto& x : v) x = normal(rng);
  return v;
}

/// Unit vector built without the library's normalize().
inline std::vector<double> random_unit(std::mt19937_64& rng, std::size_t dim) {
  auto v = random_vector(rng, dim);
  long double ss = 0;
  for (double x : v) ss += static_cast<long double>(x) * x;
  const double n = static_cast<double>(std::sqrt(ss));
  for (auto& x : v) x /= n;
  return v;
}

inline Embedding random_embedding(std::mt19937_64& rng, std::size_t dim) {
  return Embedding(random_unit(rng, dim), true);
}

/// Random store whose values are exactly representable in float32, like any
/// store read back from disk.
inline ReferenceStore random_store(std::mt19937_64& rng, std::size_t dim, std::size_t records,
                                   std::size_t label_pool = 9) {
  ReferenceStore store(dim, true);
  std::uniform_int_distribution<std::size_t> pick(0, label_pool - 1);
  for (std::size_t i = 0; i < records; ++i) {
    store.add(WaypointLabel("L" + std::to_string(pick(rng))), random_embedding(rng, dim));
  }
  return quantize_to_storage(store);
}

/// e^x from its Taylor series in long double; independent of std::exp.
inline long double exp_series(long double x) {
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int n = 1; n < 200; ++n) {
    term *= x / n;
    sum += term;
    if (std::fabs(term) < 1e-30L) break;
  }
  return sum;
}

struct OracleHit {
  std::size_t index;
  std::string label;
  double distance_sq;
};

/// Full scan: squared distance to every record in long double, then a stable
/// sort by distance, which keeps equal distances in record order.
inline std::vector<OracleHit> brute_force_ranking(const ReferenceStore& store, const Embedding& q) {
  std::vector<OracleHit> hits;
  const auto qv = q.values();
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto fv = store[i].embedding.values();
    long double acc = 0;
    for (std::size_t d = 0; d < qv.size(); ++d) {
      const long double diff = static_cast<long double>(qv[d]) - fv[d];
      acc += diff * diff;
    }
    hits.push_back({i, store[i].label.str(), static_cast<double>(acc)});
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [](const OracleHit& a, const OracleHit& b) { return a.distance_sq < b.distance_sq; });
  return hits;
}

/// Majority over a sequence; ties go to the label seen most recently.
inline std::string majority_oracle(const std::vector<std::string>& votes) {
  std::map<std::string, int> count;
  for (const auto& v : votes) count[v]++;
  int best = 0;
  for (const auto& [_, c] : count) best = std::max(best, c);
  for (auto it = votes.rbegin(); it != votes.rend(); ++it) {
    if (count[*it] == best) return *it;
  }
  return {};
}

struct OracleFrame {
  std::vector<std::pair<std::string, double>> candidates;  // label, confidence
  bool admitted = false;
  std::optional<std::string> smoothed;
};

/// Search + dedup + confidence + threshold window, written out step by step.
inline std::vector<OracleFrame> composition_oracle(const ReferenceStore& refs, const ReferenceStore& stream,
                                                   std::size_t k, double sigma, std::size_t window,
                                                   double threshold, std::size_t stride = 1) {
  std::vector<OracleFrame> out;
  std::deque<std::string> win;
  for (std::size_t f = 0; f < stream.size(); f += stride) {
    auto ranking = brute_force_ranking(refs, stream[f].embedding);
    ranking.resize(std::min(k, ranking.size()));
    std::vector<std::pair<std::string, double>> best;  // label, min d^2 in first-seen order
    for (const auto& h : ranking) {
      auto it = std::find_if(best.begin(), best.end(), [&](const auto& b) { return b.first == h.label; });
      if (it == best.end()) best.emplace_back(h.label, h.distance_sq);
      else it->second = std::min(it->second, h.distance_sq);
    }
    std::stable_sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    best.resize(std::min(k, best.size()));
    OracleFrame frame;
    for (const auto& [label, d2] : best) {
      frame.candidates.emplace_back(label, static_cast<double>(exp_series(-std::sqrt(d2) / sigma)));
    }
    if (!frame.candidates.empty() && frame.candidates.front().second > threshold) {
      frame.admitted = true;
      win.push_back(frame.candidates.front().first);
      if (win.size() > window) win.pop_front();
      frame.smoothed = majority_oracle({win.begin(), win.end()});
    }
    out.push_back(std::move(frame));
  }
  return out;
}

}  // namespace wayloc::testkit
