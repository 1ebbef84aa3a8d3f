#include "wayloc/error.hpp"

namespace wayloc {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DegenerateVector: return "DegenerateVector";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoFailure: return "IoFailure";
    case Errc::FormatOverflow: return "FormatOverflow";
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::TruncatedFile: return "TruncatedFile";
    case Errc::NormViolation: return "NormViolation";
    case Errc::EmptyStore: return "EmptyStore";
    case Errc::UnnormalizedInput: return "UnnormalizedInput";
    case Errc::UnnormalizedQuery: return "UnnormalizedQuery";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ManifestMissing: return "ManifestMissing";
    case Errc::ManifestMismatch: return "ManifestMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NegativeDistance: return "NegativeDistance";
    case Errc::InvalidSigma: return "InvalidSigma";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::NoConfidentPrediction: return "NoConfidentPrediction";
    case Errc::UnknownWaypoint: return "UnknownWaypoint";
    case Errc::MissingSection: return "MissingSection";
    case Errc::MapNotFound: return "MapNotFound";
    case Errc::EmptyDestination: return "EmptyDestination";
    case Errc::Timeout: return "Timeout";
    case Errc::HttpFailure: return "HttpFailure";
    case Errc::MalformedResponse: return "MalformedResponse";
    case Errc::EmptyJudgments: return "EmptyJudgments";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace wayloc
