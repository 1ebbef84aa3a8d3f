#include "wayloc/flat_index.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "wayloc/error.hpp"
#include "wayloc/kernels.hpp"

namespace wayloc {

namespace {

constexpr int kManifestVersion = 1;
constexpr const char* kMetric = "l2sq";

bool is_unit(const Embedding& e) {
  return e.normalized() && std::abs(e.norm() - 1.0) <= kUnitNormTolerance;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ManifestMissing, "no manifest at " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::ManifestMismatch, "malformed manifest line: " + line);
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::size_t manifest_number(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw Error(Errc::ManifestMismatch, "manifest lacks '" + key + "'");
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(it->second, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != it->second.size()) {
    throw Error(Errc::ManifestMismatch, "manifest '" + key + "' is not a number: " + it->second);
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

FlatIndex::FlatIndex(ReferenceStore store) : store_(std::move(store)) {
  rows_.reserve(store_.size() * store_.dim());
  for (const auto& rec : store_.records()) {
    const auto v = rec.embedding.values();
    rows_.insert(rows_.end(), v.begin(), v.end());
  }
}

FlatIndex FlatIndex::build(ReferenceStore store) {
  if (store.empty()) throw Error(Errc::EmptyStore, "cannot index an empty store");
  for (std::size_t i = 0; i < store.size(); ++i) {
    if (!is_unit(store[i].embedding)) {
      throw Error(Errc::UnnormalizedInput, "record " + std::to_string(i) + " is not unit-norm");
    }
  }
  return FlatIndex(std::move(store));
}

RawSearchResult FlatIndex::search(const Embedding& query, std::size_t k) const {
  if (query.dim() != dim()) {
    throw Error(Errc::DimensionMismatch,
                "query dim " + std::to_string(query.dim()) + " != index dim " + std::to_string(dim()));
  }
  if (!is_unit(query)) throw Error(Errc::UnnormalizedQuery, "query is not unit-norm");
  if (k == 0) throw Error(Errc::InvalidArgument, "k must be >= 1");

  const std::size_t n = size();
  std::vector<double> dist(n);
  kernels::active().l2_sq_rows(query.values().data(), rows_.data(), n, dim(), dist.data());

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take = std::min(k, n);
  const auto closer = [&](std::size_t a, std::size_t b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), closer);

  RawSearchResult out;
  out.labels.reserve(take);
  out.distances.reserve(take);
  out.indices.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.labels.push_back(label(order[i]));
    out.distances.push_back(dist[order[i]]);
    out.indices.push_back(order[i]);
  }
  return out;
}

std::filesystem::path manifest_path(const std::filesystem::path& index_path) {
  auto p = index_path;
  p += ".manifest";
  return p;
}

void save_index(const FlatIndex& index, const std::filesystem::path& path) {
  write_store(index.store(), path);
  std::ostringstream m;
  m << "format_version = " << kManifestVersion << '\n'
    << "dim = " << index.dim() << '\n'
    << "count = " << index.size() << '\n'
    << "metric = " << kMetric << '\n';
  const auto mpath = manifest_path(path);
  std::ofstream out(mpath, std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + mpath.string() + " for writing");
  out << m.str();
  out.close();
  if (!out) throw Error(Errc::IoFailure, "write to " + mpath.string() + " failed");
}

FlatIndex load_index(const std::filesystem::path& path) {
  const auto kv = read_manifest(manifest_path(path));
  if (manifest_number(kv, "format_version") != kManifestVersion) {
    throw Error(Errc::UnsupportedVersion, "manifest format_version " + kv.at("format_version"));
  }
  const auto metric = kv.find("metric");
  if (metric == kv.end() || metric->second != kMetric) {
    throw Error(Errc::ManifestMismatch, "manifest metric must be l2sq");
  }
  const std::size_t dim = manifest_number(kv, "dim");
  const std::size_t count = manifest_number(kv, "count");

  auto store = read_store(path);
  if (store.dim() != dim) {
    throw Error(Errc::ManifestMismatch,
                "manifest dim " + std::to_string(dim) + " != store dim " + std::to_string(store.dim()));
  }
  if (store.size() != count) {
    throw Error(Errc::ManifestMismatch, "manifest count " + std::to_string(count) + " != store count " +
                                            std::to_string(store.size()));
  }
  return FlatIndex::build(std::move(store));
}

}  // namespace wayloc
