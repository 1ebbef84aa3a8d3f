#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wayloc/nav/request.hpp"

namespace wayloc::nav {

/// Requests can take minutes on reasoning models.
inline constexpr std::chrono::seconds kDefaultTimeout{600};
inline constexpr const char* kApiKeyEnv = "NAV_LLM_API_KEY";

struct GatewayReply {
  std::string content;  ///< assistant text
  std::string raw;      ///< body exactly as received
};

/// Something that answers a chat-completion payload.
class NavGateway {
 public:
  virtual ~NavGateway() = default;

  /// Throws Timeout, HttpFailure, MalformedResponse.
  virtual GatewayReply complete(const nlohmann::json& payload, std::chrono::seconds timeout) = 0;
};

/// Replays a canned answer from a directory: `response.json` (a full
/// chat-completion response) if present, else `response.txt` (the assistant
/// text itself). Never touches the network.
class MockGateway final : public NavGateway {
 public:
  explicit MockGateway(std::filesystem::path dir);

  GatewayReply complete(const nlohmann::json& payload, std::chrono::seconds timeout) override;

  [[nodiscard]] const std::optional<nlohmann::json>& last_payload() const noexcept { return last_payload_; }

 private:
  std::filesystem::path dir_;
  std::optional<nlohmann::json> last_payload_;
};

/// POSTs the payload to an http(s) chat-completion endpoint with a bearer key.
class HttpGateway final : public NavGateway {
 public:
  /// `endpoint` is a full URL such as https://api.example.com/v1/chat/completions.
  /// Throws InvalidArgument on an unparseable URL.
  HttpGateway(std::string endpoint, std::string api_key);

  GatewayReply complete(const nlohmann::json& payload, std::chrono::seconds timeout) override;

 private:
  std::string origin_;  // scheme://host[:port]
  std::string path_;
  std::string api_key_;
};

/// Extracts choices[0].message.content from a chat-completion response body.
/// Throws MalformedResponse on an empty body, invalid JSON or missing content.
[[nodiscard]] std::string parse_completion_content(const std::string& body);

struct InstructionSet {
  std::vector<std::string> steps;  ///< non-blank lines of the reply, in order, unmodified
  std::string raw_response;
  nlohmann::json payload;
};

/// Splits reply text into steps: one per non-blank line, trailing CR dropped.
[[nodiscard]] std::vector<std::string> split_steps(const std::string& content);

/// Sends `request` through `gateway`. Throws MalformedResponse when the reply
/// carries no steps.
[[nodiscard]] InstructionSet request_instructions(NavGateway& gateway, const NavRequest& request,
                                                  std::chrono::seconds timeout = kDefaultTimeout,
                                                  const std::string& model = kDefaultModel);

/// Writes raw_response.txt, steps.json and request.json into `dir`.
void archive_instructions(const InstructionSet& set, const std::filesystem::path& dir);

}  // namespace wayloc::nav
