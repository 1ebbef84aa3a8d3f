#include "wayloc/embedding.hpp"

#include <cmath>

#include "wayloc/error.hpp"

namespace wayloc {

namespace {

double scaled_norm(std::span<const double> v) {
  // Scaled accumulation keeps tiny and huge inputs away from under/overflow.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (double x : v) {
    const double s = x / scale;
    acc += s * s;
  }
  return scale * std::sqrt(acc);
}

void require_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(Errc::NonFiniteInput, "vector has a NaN or infinite entry");
  }
}

}  // namespace

Embedding::Embedding(std::vector<double> values, bool normalized)
    : values_(std::move(values)), normalized_(normalized) {
  if (values_.empty()) throw Error(Errc::InvalidArgument, "embedding dimension must be >= 1");
  require_finite(values_);
  if (normalized_ && std::abs(norm() - 1.0) > kUnitNormTolerance) {
    throw Error(Errc::UnnormalizedInput, "embedding flagged normalized has norm " + std::to_string(norm()));
  }
}

double Embedding::norm() const noexcept { return scaled_norm(values_); }

Embedding normalize(std::span<const double> v) {
  if (v.empty()) throw Error(Errc::InvalidArgument, "cannot normalize an empty vector");
  require_finite(v);
  const double n = scaled_norm(v);
  if (!(n > kZeroNormTolerance)) throw Error(Errc::DegenerateVector, "vector norm is zero");
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x /= n;
  return Embedding(std::move(out), true);
}

Embedding normalize(const Embedding& v) { return normalize(v.values()); }

WaypointLabel::WaypointLabel(std::string id) : id_(std::move(id)) {
  if (id_.empty()) throw Error(Errc::InvalidArgument, "waypoint label must not be empty");
  if (id_.size() > kMaxBytes) throw Error(Errc::FormatOverflow, "waypoint label exceeds 65535 bytes");
}

}  // namespace wayloc
