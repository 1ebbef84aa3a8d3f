#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wayloc {

enum class Errc {
  DegenerateVector,
  NonFiniteInput,
  InvalidArgument,
  IoFailure,
  FormatOverflow,
  BadMagic,
  UnsupportedVersion,
  TruncatedFile,
  NormViolation,
  EmptyStore,
  UnnormalizedInput,
  UnnormalizedQuery,
  DimensionMismatch,
  ManifestMissing,
  ManifestMismatch,
  LengthMismatch,
  NegativeDistance,
  InvalidSigma,
  InvalidConfig,
  NoConfidentPrediction,
  UnknownWaypoint,
  MissingSection,
  MapNotFound,
  EmptyDestination,
  Timeout,
  HttpFailure,
  MalformedResponse,
  EmptyJudgments,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure in the library surfaces as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace wayloc
